"""Pairwise sentence similarity matrices feeding the DPP kernel.

A similarity matrix is a plain float64 ndarray: symmetric, unit diagonal,
entries in [0, 1]. ``validate_similarity`` enforces that contract at the
boundaries (file parsing, fusion-output checks).

Fused matrices can lose positive semidefiniteness, which the DPP's
determinants cannot tolerate, so ``project_psd`` repairs them by clipping
negative eigenvalues and renormalizing the diagonal back to 1.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import NumericalError, ParseError, ValidationError

PSD_EPS = 1e-8


def validate_similarity(s: np.ndarray, name: str = "similarity matrix") -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValidationError(f"{name}: expected a square matrix, got {s.shape}")
    if not np.array_equal(s, s.T):
        raise ValidationError(f"{name}: not symmetric")
    if s.size and not np.allclose(np.diag(s), 1.0, atol=0.0):
        raise ValidationError(f"{name}: diagonal entries must equal 1")
    if s.size and (s.min() < 0.0 or s.max() > 1.0):
        raise ValidationError(
            f"{name}: entries outside [0, 1] (min {s.min():.6g}, max {s.max():.6g})"
        )
    return s


def cosine_matrix(vectors: list[dict[str, float]]) -> np.ndarray:
    """Gram matrix of unit TF-IDF vectors, diagonal forced to 1."""
    n = len(vectors)
    terms = sorted({t for vec in vectors for t in vec})
    index = {t: i for i, t in enumerate(terms)}
    dense = np.zeros((n, len(terms)), dtype=np.float64)
    for i, vec in enumerate(vectors):
        for t, w in vec.items():
            dense[i, index[t]] = w
    s = dense @ dense.T
    s = (s + s.T) / 2.0
    np.fill_diagonal(s, 1.0)  # covers zero vectors
    return np.clip(s, 0.0, 1.0)


def combine(cos: np.ndarray, caps: np.ndarray, lambda_c: float) -> np.ndarray:
    """S = (1 - lambda_c) * cos + lambda_c * caps, re-symmetrized."""
    cos = np.asarray(cos, dtype=np.float64)
    caps = np.asarray(caps, dtype=np.float64)
    if cos.shape != caps.shape:
        raise ValidationError(
            f"cannot combine similarity matrices of shapes {cos.shape} and {caps.shape}"
        )
    if not 0.0 <= lambda_c <= 1.0:
        raise ValidationError(f"lambda_c must be in [0, 1], got {lambda_c}")
    s = (1.0 - lambda_c) * cos + lambda_c * caps
    s = (s + s.T) / 2.0
    np.fill_diagonal(s, 1.0)
    return s


def project_psd(s: np.ndarray, eps: float = PSD_EPS) -> np.ndarray:
    """Clip negative eigenvalues, then rescale the diagonal back to 1.

    The rescale D^{-1/2} M D^{-1/2} preserves semidefiniteness; the final
    clamp into [0, 1] can in principle nudge an eigenvalue back below zero,
    so the clip runs again until the minimum eigenvalue clears -eps.
    """
    s = np.asarray(s, dtype=np.float64)
    s = (s + s.T) / 2.0
    for _ in range(8):
        try:
            w = np.linalg.eigvalsh(s)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"eigendecomposition failed: {exc}") from exc
        if w.min() >= -eps:
            return s
        w_full, v = np.linalg.eigh(s)
        m = (v * np.maximum(w_full, 0.0)) @ v.T
        m = (m + m.T) / 2.0
        d = np.sqrt(np.maximum(np.diag(m), eps))
        s = m / np.outer(d, d)
        np.fill_diagonal(s, 1.0)
        s = np.clip(s, 0.0, 1.0)
        s = (s + s.T) / 2.0
    w = np.linalg.eigvalsh(s)
    if w.min() < -eps:
        raise NumericalError(
            f"PSD projection did not converge (min eigenvalue {w.min():.3e})"
        )
    return s


def emit_heatmap(s: np.ndarray, path: str | Path, max_n: int = 200) -> tuple[Path, Path]:
    """Write the top-left min(n, max_n) square as ``<path>.csv`` and ``<path>.pgm``.

    The PGM is plain/ASCII (P2) with pixel = round(255 * S_ij).
    """
    if max_n < 1:
        raise ValidationError(f"max_n must be >= 1, got {max_n}")
    s = np.asarray(s, dtype=np.float64)
    k = min(s.shape[0], max_n)
    crop = s[:k, :k]
    base = Path(path)
    csv_path = base.with_name(base.name + ".csv")
    pgm_path = base.with_name(base.name + ".pgm")

    with csv_path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        for row in crop:
            writer.writerow([f"{v:.6f}" for v in row])

    pixels = np.rint(255.0 * np.clip(crop, 0.0, 1.0)).astype(int)
    with pgm_path.open("w", encoding="utf-8") as f:
        f.write(f"P2\n{k} {k}\n255\n")
        for row in pixels:
            f.write(" ".join(str(v) for v in row) + "\n")
    return csv_path, pgm_path


def write_similarity_file(
    s: np.ndarray, path: str | Path, topic_id: str
) -> None:
    """Text format shared with the capsule-classifier exporter.

    Header line ``n=<N> topic=<topic_id>``, then N rows of N decimals.
    """
    s = np.asarray(s, dtype=np.float64)
    n = s.shape[0]
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", encoding="utf-8") as f:
        f.write(f"n={n} topic={topic_id}\n")
        for row in s:
            f.write(" ".join(f"{v:.8f}" for v in row) + "\n")
    tmp.replace(path)


def read_similarity_file(path: str | Path) -> tuple[np.ndarray, str]:
    """Parse the similarity text format; returns (matrix, topic_id)."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ParseError(f"{path}: empty similarity file")
    header = lines[0].split()
    if len(header) != 2 or not header[0].startswith("n=") or not header[1].startswith("topic="):
        raise ParseError(f"{path}: line 1: expected header 'n=<N> topic=<id>'")
    try:
        n = int(header[0][2:])
    except ValueError as exc:
        raise ParseError(f"{path}: line 1: bad n value {header[0][2:]!r}") from exc
    topic_id = header[1][len("topic="):]
    rows = [line for line in lines[1:] if line.strip()]
    if len(rows) != n:
        raise ParseError(f"{path}: expected {n} matrix rows, found {len(rows)}")
    values = np.zeros((n, n), dtype=np.float64)
    for i, line in enumerate(rows):
        parts = line.split()
        if len(parts) != n:
            raise ParseError(f"{path}: line {i + 2}: expected {n} values, found {len(parts)}")
        try:
            values[i] = [float(p) for p in parts]
        except ValueError as exc:
            raise ParseError(f"{path}: line {i + 2}: non-numeric entry") from exc
    # Emitters symmetrize before writing; re-enforce defensively against
    # rounded text and hand-edited files.
    values = (values + values.T) / 2.0
    np.fill_diagonal(values, 1.0)
    values = np.clip(values, 0.0, 1.0)
    return validate_similarity(values, str(path)), topic_id
