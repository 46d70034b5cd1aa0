"""The determinantal point process over a cluster's ground set.

The L-ensemble factors as L_ij = q_i * S_ij * q_j: per-sentence qualities
q on the outside, pairwise similarity S inside. Subset probabilities are
P(Y) = det(L_Y) / det(L + I); the empty submatrix has determinant 1.

MAP inference under a word budget is greedy: repeatedly add the feasible
sentence that maximizes the subset log-probability, stop once nothing fits
or nothing strictly increases the determinant. ``exhaustive_map`` is the
small-n oracle used by tests and --exact mode.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Sentence
from .errors import NumericalError, ValidationError
from .similarity import PSD_EPS

EXHAUSTIVE_MAX_N = 20
# Relative eigenvalue cutoff below which a submatrix counts as singular.
_SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class LEnsemble:
    """Kernel L plus the quality/similarity pair it was assembled from."""

    n: int
    L: np.ndarray
    q: np.ndarray
    S: np.ndarray


@dataclass(frozen=True)
class SummarySelection:
    """Result of MAP inference: ids in selection order plus diagnostics."""

    indices: tuple[int, ...]
    word_count: int
    log_prob: float


def build_l(q: np.ndarray, s: np.ndarray) -> LEnsemble:
    """Assemble L_ij = q_i * S_ij * q_j and check it is PSD."""
    q = np.asarray(q, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    if q.ndim != 1 or len(q) != s.shape[0]:
        raise ValidationError(
            f"quality vector length {q.shape} does not match similarity {s.shape}"
        )
    if np.any(q <= 0.0) or not np.all(np.isfinite(q)):
        raise ValidationError("qualities must be positive finite reals")
    l_mat = q[:, None] * s * q[None, :]
    l_mat = (l_mat + l_mat.T) / 2.0
    if l_mat.size:
        min_eig = float(np.linalg.eigvalsh(l_mat).min())
        if min_eig < -PSD_EPS * max(1.0, float(np.abs(l_mat).max())):
            raise NumericalError(
                f"L-ensemble is not PSD (min eigenvalue {min_eig:.3e}); "
                "repair S with project_psd first"
            )
    return LEnsemble(n=len(q), L=l_mat, q=q, S=s)


def _logdet_psd(a: np.ndarray) -> float:
    """log det of a symmetric PSD matrix; -inf when singular.

    Cholesky is the fast path; semidefinite inputs (duplicate sentences)
    make it fail, in which case the eigenvalue route decides between
    "singular" and "ill-conditioned but positive".
    """
    if a.size == 0:
        return 0.0
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        w = np.linalg.eigvalsh((a + a.T) / 2.0)
        cutoff = float(w.max()) * _SINGULAR_RTOL if w.max() > 0 else 0.0
        if w.min() <= cutoff:
            return -np.inf
        return float(np.sum(np.log(w)))
    diag = np.diag(chol)
    if np.any(diag <= 0.0):
        return -np.inf
    return float(2.0 * np.sum(np.log(diag)))


def log_normalizer(ensemble: LEnsemble) -> float:
    """log det(L + I); always finite because L + I is positive definite."""
    value = _logdet_psd(ensemble.L + np.eye(ensemble.n))
    if not np.isfinite(value):
        raise NumericalError("factorization of L + I failed")
    return value


def log_prob(indices: Sequence[int], ensemble: LEnsemble) -> float:
    """log P(Y) = log det(L_Y) - log det(L + I); -inf for singular L_Y."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise ValidationError(f"subset contains repeated indices: {idx}")
    if idx and (min(idx) < 0 or max(idx) >= ensemble.n):
        raise ValidationError(f"subset {idx} outside ground set 0..{ensemble.n - 1}")
    sub = ensemble.L[np.ix_(idx, idx)]
    return _logdet_psd(sub) - log_normalizer(ensemble)


def marginal_kernel(ensemble: LEnsemble) -> np.ndarray:
    """K = L (L + I)^{-1}, computed as I - (L + I)^{-1}."""
    n = ensemble.n
    if n == 0:
        return np.zeros((0, 0), dtype=np.float64)
    try:
        inv = np.linalg.inv(ensemble.L + np.eye(n))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"failed to invert L + I: {exc}") from exc
    k = np.eye(n) - inv
    return (k + k.T) / 2.0


def greedy_map(
    ensemble: LEnsemble,
    sentences: Sequence[Sentence],
    budget_words: int,
) -> SummarySelection:
    """Budgeted greedy MAP inference.

    Each step adds the in-budget sentence maximizing det(L_{Y+i}), ties
    broken by lower id; over-budget candidates are skipped rather than
    terminating the loop. Stops when nothing fits or the best candidate no
    longer strictly increases the determinant.
    """
    if budget_words < 1:
        raise ValidationError(f"budget_words must be >= 1, got {budget_words}")
    if len(sentences) != ensemble.n:
        raise ValidationError(
            f"{len(sentences)} sentences for an L-ensemble of size {ensemble.n}"
        )
    selected: list[int] = []
    words = 0
    cur_logdet = 0.0  # det of the empty submatrix is 1
    remaining = set(range(ensemble.n))
    while remaining:
        best_id = -1
        best_logdet = -np.inf
        for i in sorted(remaining):
            if words + len(sentences[i].tokens) > budget_words:
                continue
            cand = selected + [i]
            ld = _logdet_psd(ensemble.L[np.ix_(cand, cand)])
            if ld > best_logdet:
                best_logdet = ld
                best_id = i
        if best_id < 0 or best_logdet <= cur_logdet:
            break
        selected.append(best_id)
        remaining.discard(best_id)
        words += len(sentences[best_id].tokens)
        cur_logdet = best_logdet
    return SummarySelection(
        indices=tuple(selected),
        word_count=words,
        log_prob=cur_logdet - log_normalizer(ensemble),
    )


def exhaustive_map(
    ensemble: LEnsemble,
    sentences: Sequence[Sentence],
    budget_words: int,
) -> SummarySelection:
    """Enumerate all feasible subsets and return the determinant maximizer.

    Ties prefer fewer sentences, then the lexicographically smallest index
    tuple, so results are deterministic and agree with greedy's empty
    selection when unit qualities make every subset determinant 1.
    """
    if ensemble.n > EXHAUSTIVE_MAX_N:
        raise ValidationError(
            f"exhaustive_map refuses n={ensemble.n} > {EXHAUSTIVE_MAX_N}"
        )
    lengths = [len(s.tokens) for s in sentences]
    best: tuple[int, ...] = ()
    best_logdet = 0.0
    best_words = 0
    for size in range(1, ensemble.n + 1):
        for combo in itertools.combinations(range(ensemble.n), size):
            words = sum(lengths[i] for i in combo)
            if words > budget_words:
                continue
            ld = _logdet_psd(ensemble.L[np.ix_(combo, combo)])
            if ld > best_logdet:
                best = combo
                best_logdet = ld
                best_words = words
    return SummarySelection(
        indices=best,
        word_count=best_words,
        log_prob=best_logdet - log_normalizer(ensemble),
    )
