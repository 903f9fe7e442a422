"""Shared fixtures and mock transports for the test suite."""

from __future__ import annotations

import pytest

from geocmd.datagen import SplitSpec, generate, split


class EchoTransport:
    """Answers every prompt with the reference call for the embedded query.

    The query is recovered from the prompt's final "User:" line, so this
    exercises the real prompt construction and extraction path end to end.
    """

    def __init__(self, reference_by_query: dict[str, str]):
        self.reference_by_query = reference_by_query

    def _query_of(self, payload: dict) -> str:
        prompt = payload["messages"][0]["content"]
        return prompt.rsplit("User: ", 1)[1].split("\n", 1)[0]

    def send(self, config, payload):
        return {"text": self.reference_by_query[self._query_of(payload)]}


def corrupt_one_token(call: str) -> str:
    """Substitute the last alphanumeric character with a different one."""
    chars = list(call)
    for i in range(len(chars) - 1, -1, -1):
        if chars[i].isalnum():
            chars[i] = "x" if chars[i] != "x" else "y"
            return "".join(chars)
    return call + "x"


class CorruptingTransport(EchoTransport):
    """Echoes the reference with exactly one token swapped per prediction."""

    def send(self, config, payload):
        return {"text": corrupt_one_token(self.reference_by_query[self._query_of(payload)])}


@pytest.fixture(scope="session")
def full_corpus():
    return generate(seed=1, per_function=200)


@pytest.fixture(scope="session")
def full_split(full_corpus):
    return split(full_corpus, SplitSpec(seed=1))
