"""geocmd: natural-language map commands, translators, and evaluation."""

from geocmd.calls import (
    GIS_FUNCTIONS,
    GisCall,
    ParseError,
    parse_call,
    serialize_call,
    function_name,
)

__all__ = [
    "GIS_FUNCTIONS",
    "GisCall",
    "ParseError",
    "parse_call",
    "serialize_call",
    "function_name",
]

__version__ = "0.1.0"
