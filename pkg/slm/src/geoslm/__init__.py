"""Small seq2seq translator for map commands."""

__version__ = "0.1.0"
