"""Oracle extractive labels and maximum-likelihood training of qualities.

Ground-truth summaries come from the references by iterative matching:
pick the source sentence with the largest total longest-common-subsequence
overlap against the (shrinking) references, then delete the matched tokens
from each reference so later picks cannot be credited for the same words.

Qualities are q_i = exp(theta . x_i). With similarity held fixed the
log-likelihood sum_m [log det(L_Yhat) - log det(L + I)] is smooth in theta
and is maximized by plain full-batch gradient ascent from theta = 0.
Features are standardized (bias dimension excluded) with statistics stored
in the model so inference reproduces training-time qualities.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Cluster
from .errors import NumericalError, ParseError, ValidationError
from .features import FEATURE_DIM, feature_matrix
from .rouge import lcs_length
from .similarity import cosine_matrix
from . import dpp, features as _features

logger = logging.getLogger(__name__)

DEFAULT_LEARNING_RATE = 1e-3
DEFAULT_EPOCHS = 50
DEFAULT_ORACLE_BUDGET = 100


@dataclass(frozen=True)
class OracleLabel:
    """The ground-truth extractive summary for one cluster."""

    topic_id: str
    indices: tuple[int, ...]


@dataclass(frozen=True)
class QualityModel:
    """Learned feature weights plus the normalization that produced them."""

    theta: np.ndarray
    feature_means: np.ndarray
    feature_scales: np.ndarray
    trained_on: str

    def standardize(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.feature_means) / self.feature_scales

    def qualities(self, x: np.ndarray) -> np.ndarray:
        """q_i = exp(theta . x_i) over standardized feature rows."""
        return np.exp(self.standardize(x) @ self.theta)

    def save(self, path: str | Path) -> None:
        payload = {
            "theta": self.theta.tolist(),
            "feature_means": self.feature_means.tolist(),
            "feature_scales": self.feature_scales.tolist(),
            "trained_on": self.trained_on,
        }
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "QualityModel":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc.msg} (line {exc.lineno})") from exc
        try:
            model = cls(
                theta=np.asarray(payload["theta"], dtype=np.float64),
                feature_means=np.asarray(payload["feature_means"], dtype=np.float64),
                feature_scales=np.asarray(payload["feature_scales"], dtype=np.float64),
                trained_on=str(payload.get("trained_on", "")),
            )
        except KeyError as exc:
            raise ParseError(f"{path}: missing model field {exc}") from exc
        if not np.all(np.isfinite(model.theta)) or np.any(model.feature_scales <= 0):
            raise ValidationError(f"{path}: non-finite theta or non-positive scales")
        return model


def zero_model(dim: int = FEATURE_DIM) -> QualityModel:
    """Uniform-quality model: theta = 0, identity normalization."""
    return QualityModel(
        theta=np.zeros(dim),
        feature_means=np.zeros(dim),
        feature_scales=np.ones(dim),
        trained_on="zero",
    )


def lcs_positions(a: Sequence[str], b: Sequence[str]) -> list[int]:
    """Positions in ``b`` matched by one longest common subsequence of a, b.

    Backtracking prefers consuming ``a`` on ties, which fixes a single
    deterministic alignment among the possibly many optimal ones.
    """
    n, m = len(a), len(b)
    table = np.zeros((n + 1, m + 1), dtype=np.int32)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if a[i - 1] == b[j - 1]:
                table[i, j] = table[i - 1, j - 1] + 1
            else:
                table[i, j] = max(table[i - 1, j], table[i, j - 1])
    positions: list[int] = []
    i, j = n, m
    while i > 0 and j > 0:
        if a[i - 1] == b[j - 1]:
            positions.append(j - 1)
            i -= 1
            j -= 1
        elif table[i - 1, j] >= table[i, j - 1]:
            i -= 1
        else:
            j -= 1
    positions.reverse()
    return positions


def oracle_labels(cluster: Cluster, budget_words: int = DEFAULT_ORACLE_BUDGET) -> OracleLabel:
    """Iterative LCS matching of source sentences against the references."""
    if not cluster.references:
        raise ValidationError(
            f"cluster {cluster.topic_id!r} has no references; cannot build oracle labels"
        )
    refs: list[list[str]] = [list(r) for r in cluster.references]
    selected: list[int] = []
    words = 0
    while True:
        best_id = -1
        best_gain = 0
        for sent in cluster.sentences:
            if sent.id in selected:
                continue
            gain = sum(lcs_length(sent.tokens, ref) for ref in refs)
            if gain > best_gain:
                best_gain = gain
                best_id = sent.id
        if best_id < 0:
            break
        sent = cluster.sentences[best_id]
        selected.append(best_id)
        words += len(sent.tokens)
        for ref in refs:
            matched = lcs_positions(sent.tokens, ref)
            for pos in reversed(matched):
                del ref[pos]
        if words >= budget_words:
            break
    return OracleLabel(topic_id=cluster.topic_id, indices=tuple(selected))


# One training instance: feature rows (n, F), similarity (n, n), label.
TrainingInstance = tuple[np.ndarray, np.ndarray, OracleLabel]


def build_training_data(
    clusters: Sequence[Cluster],
    budget_words: int = DEFAULT_ORACLE_BUDGET,
    labels: Sequence[OracleLabel] | None = None,
) -> list[TrainingInstance]:
    """Features + cosine similarity + oracle label per cluster."""
    if labels is None:
        labels = [oracle_labels(c, budget_words) for c in clusters]
    if len(labels) != len(clusters):
        raise ValidationError("one oracle label per cluster is required")
    data = []
    for cluster, label in zip(clusters, labels):
        if label.topic_id != cluster.topic_id:
            raise ValidationError(
                f"label topic {label.topic_id!r} does not match cluster {cluster.topic_id!r}"
            )
        x = feature_matrix(cluster)
        s = cosine_matrix(_features.tfidf_vectors(cluster))
        data.append((x, s, label))
    return data


def _ensemble(theta: np.ndarray, x: np.ndarray, s: np.ndarray) -> dpp.LEnsemble:
    q = np.exp(x @ theta)
    return dpp.LEnsemble(n=len(q), L=q[:, None] * s * q[None, :], q=q, S=s)


def log_likelihood(theta: np.ndarray, data: Sequence[TrainingInstance]) -> float:
    """Sum over clusters of log det(L_Yhat) - log det(L + I)."""
    theta = np.asarray(theta, dtype=np.float64)
    total = 0.0
    for x, s, label in data:
        ens = _ensemble(theta, x, s)
        if label.indices and max(label.indices) >= ens.n:
            raise ValidationError(
                f"label {label.topic_id!r} indexes outside the ground set"
            )
        idx = list(label.indices)
        term = dpp._logdet_psd(ens.L[np.ix_(idx, idx)]) - dpp.log_normalizer(ens)
        if not np.isfinite(term):
            logger.warning(
                "singular L_Yhat for topic %s; likelihood term is -inf", label.topic_id
            )
        total += term
    return float(total)


def gradient(theta: np.ndarray, data: Sequence[TrainingInstance]) -> np.ndarray:
    """Exact gradient: sum_m 2 [sum_{i in Yhat} x_i - sum_i K_ii x_i]."""
    theta = np.asarray(theta, dtype=np.float64)
    grad = np.zeros_like(theta)
    for x, s, label in data:
        ens = _ensemble(theta, x, s)
        k_diag = np.diag(dpp.marginal_kernel(ens))
        picked = x[list(label.indices)].sum(axis=0) if label.indices else 0.0
        grad += 2.0 * (picked - k_diag @ x)
    return grad


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = DEFAULT_LEARNING_RATE
    epochs: int = DEFAULT_EPOCHS
    seed: int = 0


def standardization_stats(data: Sequence[TrainingInstance]) -> tuple[np.ndarray, np.ndarray]:
    """Per-dimension mean/scale over all sentences; bias dim left alone."""
    stacked = np.vstack([x for x, _, _ in data])
    means = stacked.mean(axis=0)
    scales = stacked.std(axis=0)
    means[0] = 0.0  # keep the bias feature at exactly 1
    scales[0] = 1.0
    scales[scales < 1e-12] = 1.0
    return means, scales


def dataset_fingerprint(data: Sequence[TrainingInstance]) -> str:
    h = hashlib.sha256()
    for x, s, label in data:
        h.update(label.topic_id.encode("utf-8"))
        h.update(np.ascontiguousarray(x).tobytes())
        h.update(np.ascontiguousarray(s).tobytes())
        h.update(repr(label.indices).encode("utf-8"))
    return h.hexdigest()[:16]


def train_dpp(
    data: Sequence[TrainingInstance],
    config: TrainConfig = TrainConfig(),
) -> tuple[QualityModel, list[float]]:
    """Full-batch gradient ascent from theta = 0.

    Returns the fitted model and the per-epoch log-likelihood history
    (entry 0 is the likelihood at theta = 0). The seed only shuffles the
    order terms are summed in; the update itself is full-batch.
    """
    if not data:
        raise ValidationError("training data is empty")
    means, scales = standardization_stats(data)
    std_data = [((x - means) / scales, s, label) for x, s, label in data]
    rng = random.Random(config.seed)
    theta = np.zeros(std_data[0][0].shape[1], dtype=np.float64)
    history = [log_likelihood(theta, std_data)]
    order = list(range(len(std_data)))
    for epoch in range(config.epochs):
        rng.shuffle(order)
        shuffled = [std_data[i] for i in order]
        theta = theta + config.learning_rate * gradient(theta, shuffled)
        ll = log_likelihood(theta, shuffled)
        if not np.isfinite(ll):
            raise NumericalError(
                f"log-likelihood became non-finite at epoch {epoch + 1} "
                f"(lr={config.learning_rate}, theta={theta.tolist()})"
            )
        history.append(ll)
    model = QualityModel(
        theta=theta,
        feature_means=means,
        feature_scales=scales,
        trained_on=dataset_fingerprint(data),
    )
    return model, history
