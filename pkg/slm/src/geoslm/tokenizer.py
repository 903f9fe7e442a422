"""Lossless word/digit/symbol tokenizer with a leading-space marker.

Tokens are letter runs, single digits, and single symbol characters; a
token consumed after a space carries the marker prefix so decoding can
reconstruct the original text byte-for-byte (single-spaced text, which is
all the corpus contains). Digits tokenize individually so the decoder can
copy arbitrary coordinates from the source one digit at a time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

MARKER = "▁"  # visually distinct, never appears in the corpus

PAD, BOS, EOS, UNK = "<pad>", "<s>", "</s>", "<unk>"
SPECIALS = (PAD, BOS, EOS, UNK)

_TOKEN_RE = re.compile(r"[A-Za-z]+|[0-9]|[^A-Za-z0-9\s]")


def scan(text: str) -> list[str]:
    tokens = []
    for match in _TOKEN_RE.finditer(text):
        spaced = match.start() > 0 and text[match.start() - 1].isspace()
        tokens.append((MARKER if spaced else "") + match.group())
    return tokens


def join(tokens: Iterable[str]) -> str:
    parts = []
    for token in tokens:
        if token in SPECIALS:
            continue
        if token.startswith(MARKER):
            parts.append(" " + token[len(MARKER):])
        else:
            parts.append(token)
    return "".join(parts)


@dataclass
class Tokenizer:
    token_to_id: dict[str, int]
    max_len: int = 64

    @classmethod
    def build(cls, texts: Iterable[str], max_len: int = 64) -> "Tokenizer":
        seen: dict[str, None] = {}
        for text in texts:
            for token in scan(text):
                seen[token] = None
        vocab = list(SPECIALS) + sorted(seen)
        return cls({token: i for i, token in enumerate(vocab)}, max_len=max_len)

    @property
    def size(self) -> int:
        return len(self.token_to_id)

    @property
    def id_to_token(self) -> list[str]:
        ordered = [""] * len(self.token_to_id)
        for token, index in self.token_to_id.items():
            ordered[index] = token
        return ordered

    @property
    def pad_id(self) -> int:
        return self.token_to_id[PAD]

    @property
    def bos_id(self) -> int:
        return self.token_to_id[BOS]

    @property
    def eos_id(self) -> int:
        return self.token_to_id[EOS]

    @property
    def unk_id(self) -> int:
        return self.token_to_id[UNK]

    def encode_source(self, text: str) -> list[int]:
        """Token ids padded (or truncated) to exactly ``max_len``."""
        unk = self.unk_id
        ids = [self.token_to_id.get(t, unk) for t in scan(text)][: self.max_len]
        return ids + [self.pad_id] * (self.max_len - len(ids))

    def encode_target(self, text: str) -> list[int]:
        """Target ids with EOS, padded to exactly ``max_len``."""
        unk = self.unk_id
        ids = [self.token_to_id.get(t, unk) for t in scan(text)][: self.max_len - 1]
        ids.append(self.eos_id)
        return ids + [self.pad_id] * (self.max_len - len(ids))

    def decode(self, ids: Iterable[int]) -> str:
        tokens = []
        id_to_token = self.id_to_token
        for index in ids:
            token = id_to_token[index]
            if token == EOS:
                break
            tokens.append(token)
        return join(tokens)
