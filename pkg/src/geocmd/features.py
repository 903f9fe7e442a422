"""TF-IDF featurization of queries for the classical classifiers.

Tokenization lowercases, splits on runs of non-alphanumerics, and maps
purely numeric tokens to the ``<num>`` placeholder: coordinates differ on
every sample, so literal digit strings would be noise features. Terms are
unigrams plus adjacent bigrams; inverse document frequencies are smoothed
as ln((1 + N) / (1 + df)) + 1 and vectors are L2-normalized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

NUM_TOKEN = "<num>"

_SPLIT_RE = re.compile(r"[^0-9a-z]+")


class EmptyVocabulary(ValueError):
    """The training corpus produced no terms at all."""


def tokenize_query(text: str) -> list[str]:
    tokens = [t for t in _SPLIT_RE.split(text.lower()) if t]
    return [NUM_TOKEN if t.isdigit() else t for t in tokens]


def query_terms(text: str) -> list[str]:
    """Unigrams followed by adjacent bigrams (space-joined)."""
    tokens = tokenize_query(text)
    return tokens + [f"{a} {b}" for a, b in zip(tokens, tokens[1:])]


@dataclass(frozen=True)
class FeatureVector:
    """Sparse L2-normalized tf-idf weights, sorted by term index."""

    indices: np.ndarray
    weights: np.ndarray
    dimension: int

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.weights**2)))


class Vocabulary:
    """Term-to-index map with per-term idf, built from the training split only."""

    def __init__(self, term_index: dict[str, int], idf: np.ndarray, n_docs: int):
        self.term_index = term_index
        self.idf = idf
        self.n_docs = n_docs

    @property
    def size(self) -> int:
        return len(self.term_index)

    @property
    def terms(self) -> list[str]:
        ordered = [""] * len(self.term_index)
        for term, index in self.term_index.items():
            ordered[index] = term
        return ordered


def fit_vocabulary(queries: Iterable[str]) -> Vocabulary:
    """Collect terms and document frequencies from training queries.

    Indices are dense 0..V-1 in lexicographic term order, which makes the
    vocabulary (and everything downstream) independent of input order.
    """
    df: dict[str, int] = {}
    n_docs = 0
    for query in queries:
        n_docs += 1
        for term in set(query_terms(query)):
            df[term] = df.get(term, 0) + 1
    if not df:
        raise EmptyVocabulary("training corpus yields zero terms")
    term_index = {term: i for i, term in enumerate(sorted(df))}
    idf = np.zeros(len(term_index))
    for term, index in term_index.items():
        idf[index] = np.log((1.0 + n_docs) / (1.0 + df[term])) + 1.0
    return Vocabulary(term_index, idf, n_docs)


def featurize(vocab: Vocabulary, query: str) -> FeatureVector:
    """tf-idf weights for one query; unseen terms are ignored.

    A query with no known terms yields the zero vector: defined, not an
    error, so prediction still works (and degrades) on out-of-vocabulary
    input.
    """
    counts: dict[int, int] = {}
    for term in query_terms(query):
        index = vocab.term_index.get(term)
        if index is not None:
            counts[index] = counts.get(index, 0) + 1
    if not counts:
        return FeatureVector(np.empty(0, dtype=np.int64), np.empty(0), vocab.size)
    indices = np.array(sorted(counts), dtype=np.int64)
    weights = np.array([counts[i] for i in indices], dtype=float) * vocab.idf[indices]
    norm = np.sqrt(np.sum(weights**2))
    if norm > 0:
        weights = weights / norm
    return FeatureVector(indices, weights, vocab.size)


def featurize_matrix(vocab: Vocabulary, queries: Sequence[str]) -> sparse.csr_matrix:
    """Stack featurized queries into a CSR matrix of shape (n, V)."""
    data: list[float] = []
    indices: list[int] = []
    indptr = [0]
    for query in queries:
        vec = featurize(vocab, query)
        data.extend(vec.weights.tolist())
        indices.extend(vec.indices.tolist())
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(queries), vocab.size),
    )
