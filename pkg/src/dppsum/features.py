"""Sentence TF-IDF vectors and the quality feature vectors.

TF-IDF weights use the smoothed form idf(t) = ln((1 + D) / (1 + df(t))) + 1
with document frequencies counted over the cluster's documents, which keeps
every weight strictly positive. Sentence vectors are L2-normalized so the
similarity kernel can be a plain dot product.

Quality features are deliberately plain: a bias, a capped length, a
reciprocal-rank position, and the cosine between the sentence and the
cluster centroid. No stopword removal, no stemming.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from collections import Counter

import numpy as np

from .corpus import Cluster, Sentence

FEATURE_DIM = 4
LENGTH_CAP = 50  # tokens; sentences at or above this get length feature 1.0


@dataclass(frozen=True)
class IdfTable:
    """Inverse document frequencies for one cluster."""

    weights: dict[str, float]
    document_count: int

    def weight(self, term: str) -> float:
        try:
            return self.weights[term]
        except KeyError:
            # Unseen at build time: df = 0.
            return math.log(1.0 + self.document_count) + 1.0


def build_idf(cluster: Cluster) -> IdfTable:
    """Document frequencies over the cluster's documents."""
    df: Counter[str] = Counter()
    for doc in cluster.documents:
        seen: set[str] = set()
        for sent in doc.sentences:
            seen.update(sent.tokens)
        df.update(seen)
    d = len(cluster.documents)
    weights = {t: math.log((1.0 + d) / (1.0 + n)) + 1.0 for t, n in df.items()}
    return IdfTable(weights=weights, document_count=d)


def tfidf(sentence: Sentence, idf: IdfTable) -> dict[str, float]:
    """L2-normalized sparse TF-IDF vector; empty sentences map to {}."""
    counts = Counter(sentence.tokens)
    vec = {t: c * idf.weight(t) for t, c in counts.items()}
    norm = math.sqrt(sum(w * w for w in vec.values()))
    if norm == 0.0:
        return {}
    return {t: w / norm for t, w in vec.items()}


def sparse_dot(a: dict[str, float], b: dict[str, float]) -> float:
    if len(b) < len(a):
        a, b = b, a
    return sum(w * b[t] for t, w in a.items() if t in b)


def cluster_centroid(vectors: list[dict[str, float]]) -> dict[str, float]:
    """L2-normalized mean of the sentence TF-IDF vectors."""
    acc: dict[str, float] = {}
    for vec in vectors:
        for t, w in vec.items():
            acc[t] = acc.get(t, 0.0) + w
    n = len(vectors)
    if n == 0:
        return {}
    norm = math.sqrt(sum(w * w for w in acc.values()))
    if norm == 0.0:
        return {}
    return {t: w / norm for t, w in acc.items()}


def quality_features(
    sentence: Sentence, cluster: Cluster, idf: IdfTable
) -> np.ndarray:
    """x = [1, min(len, 50)/50, 1/(1 + position), cos(sentence, centroid)]."""
    vectors = [tfidf(s, idf) for s in cluster.sentences]
    centroid = cluster_centroid(vectors)
    return _features_one(sentence, vectors[sentence.id], centroid)


def _features_one(
    sentence: Sentence, vector: dict[str, float], centroid: dict[str, float]
) -> np.ndarray:
    length = min(len(sentence.tokens), LENGTH_CAP) / LENGTH_CAP
    position = 1.0 / (1.0 + sentence.position)
    cos = sparse_dot(vector, centroid)
    return np.array([1.0, length, position, cos], dtype=np.float64)


def feature_matrix(cluster: Cluster, idf: IdfTable | None = None) -> np.ndarray:
    """Stack quality features for the whole ground set, shape (N, 4)."""
    if idf is None:
        idf = build_idf(cluster)
    vectors = [tfidf(s, idf) for s in cluster.sentences]
    centroid = cluster_centroid(vectors)
    rows = [
        _features_one(s, vectors[s.id], centroid) for s in cluster.sentences
    ]
    if not rows:
        return np.zeros((0, FEATURE_DIM), dtype=np.float64)
    return np.vstack(rows)


def tfidf_vectors(cluster: Cluster, idf: IdfTable | None = None) -> list[dict[str, float]]:
    if idf is None:
        idf = build_idf(cluster)
    return [tfidf(s, idf) for s in cluster.sentences]
