"""Scoring whole clusters into the shared similarity file format.

The cluster JSON contract and tokenizer rules mirror the summarizer's
documented interfaces (lowercase, whitespace split, edge punctuation
detached) so exported matrices line up index-for-index with its ground
set. Output format: header ``n=<N> topic=<topic_id>`` then N rows of N
decimals; symmetric with unit diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .data import PairRecord, make_batch
from .model import RedundancyCapsNet
from .vocab import Vocabulary

_EDGE_PUNCT = set(".,!?;:\"'()")


def tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    for chunk in text.lower().split():
        left: list[str] = []
        right: list[str] = []
        while chunk and chunk[0] in _EDGE_PUNCT:
            left.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _EDGE_PUNCT:
            right.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(left)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(right))
    return tokens


@dataclass(frozen=True)
class ClusterSentences:
    topic_id: str
    sentences: list[tuple[str, ...]]


def load_cluster_sentences(path: str | Path) -> ClusterSentences:
    """Ground-set token lists in id order (empty sentences dropped)."""
    path = Path(path)
    payload = json.loads(path.read_text(encoding="utf-8"))
    sentences: list[tuple[str, ...]] = []
    for doc in payload["documents"]:
        for raw in doc["sentences"]:
            tokens = tuple(tokenize(raw))
            if tokens:
                sentences.append(tokens)
    return ClusterSentences(topic_id=payload["topic_id"], sentences=sentences)


@torch.no_grad()
def score_cluster(
    model: RedundancyCapsNet,
    vocab: Vocabulary,
    cluster: ClusterSentences,
    batch_size: int = 256,
) -> np.ndarray:
    """Order-averaged pairwise scores; unit diagonal; entries in [0, 1]."""
    n = len(cluster.sentences)
    matrix = np.eye(n, dtype=np.float64)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    model.eval()
    for start in range(0, len(pairs), batch_size):
        chunk = pairs[start : start + batch_size]
        records = [
            PairRecord(a=cluster.sentences[i], b=cluster.sentences[j], label=0)
            for i, j in chunk
        ]
        batch = make_batch(records, vocab, model.config.max_len)
        scores = model.predict_symmetric(batch)
        for (i, j), score in zip(chunk, scores.tolist()):
            matrix[i, j] = matrix[j, i] = min(max(score, 0.0), 1.0)
    return matrix


def write_similarity_file(matrix: np.ndarray, path: str | Path, topic_id: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    n = matrix.shape[0]
    with tmp.open("w", encoding="utf-8") as f:
        f.write(f"n={n} topic={topic_id}\n")
        for row in matrix:
            f.write(" ".join(f"{v:.8f}" for v in row) + "\n")
    tmp.replace(path)


def export_similarity(
    model: RedundancyCapsNet,
    vocab: Vocabulary,
    cluster_path: str | Path,
    out_path: str | Path,
    batch_size: int = 256,
) -> np.ndarray:
    cluster = load_cluster_sentences(cluster_path)
    matrix = score_cluster(model, vocab, cluster, batch_size=batch_size)
    write_similarity_file(matrix, out_path, cluster.topic_id)
    return matrix
