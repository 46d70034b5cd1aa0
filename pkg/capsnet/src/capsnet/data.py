"""Pair records and batch assembly.

Input is the pair-mining JSONL interchange format: one object per line
with token arrays "a" and "b", an integer "label", and a "source_id".
Word-overlap indicator vectors are computed from the raw tokens (not the
vocabulary ids) and are zero at padded positions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import torch

from .vocab import Vocabulary


@dataclass(frozen=True)
class PairRecord:
    a: tuple[str, ...]
    b: tuple[str, ...]
    label: int
    source_id: str = ""


@dataclass
class PairBatch:
    ids_a: torch.Tensor  # (batch, L) int64
    ids_b: torch.Tensor
    z_a: torch.Tensor  # (batch, L) float, overlap indicators
    z_b: torch.Tensor
    labels: torch.Tensor  # (batch,) float

    def __len__(self) -> int:
        return self.ids_a.shape[0]

    def to(self, dtype: torch.dtype) -> "PairBatch":
        return PairBatch(
            self.ids_a, self.ids_b,
            self.z_a.to(dtype), self.z_b.to(dtype), self.labels.to(dtype),
        )


def load_pairs(path: str | Path) -> list[PairRecord]:
    records: list[PairRecord] = []
    path = Path(path)
    with path.open("r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc.msg}") from exc
            for key in ("a", "b", "label"):
                if key not in obj:
                    raise ValueError(f"{path}: line {lineno}: missing field {key!r}")
            if obj["label"] not in (0, 1):
                raise ValueError(f"{path}: line {lineno}: label must be 0 or 1")
            records.append(
                PairRecord(
                    a=tuple(obj["a"]),
                    b=tuple(obj["b"]),
                    label=int(obj["label"]),
                    source_id=str(obj.get("source_id", "")),
                )
            )
    return records


def overlap_vector(tokens: Sequence[str], other: Sequence[str], max_len: int) -> list[float]:
    """z[i] = 1 when tokens[i] occurs anywhere in ``other``; 0 at padding."""
    other_set = set(other)
    z = [1.0 if t in other_set else 0.0 for t in tokens[:max_len]]
    return z + [0.0] * (max_len - len(z))


def make_batch(
    records: Sequence[PairRecord], vocab: Vocabulary, max_len: int
) -> PairBatch:
    ids_a = torch.tensor([vocab.encode(r.a, max_len) for r in records], dtype=torch.int64)
    ids_b = torch.tensor([vocab.encode(r.b, max_len) for r in records], dtype=torch.int64)
    z_a = torch.tensor([overlap_vector(r.a, r.b, max_len) for r in records])
    z_b = torch.tensor([overlap_vector(r.b, r.a, max_len) for r in records])
    labels = torch.tensor([float(r.label) for r in records])
    return PairBatch(ids_a=ids_a, ids_b=ids_b, z_a=z_a, z_b=z_b, labels=labels)
