"""Scikit-learn style front door for the summarizer.

``DppSummarizer.fit`` takes clusters (with references), builds oracle
labels, and learns the quality weights; ``predict`` runs budgeted MAP
inference per cluster. All the real work lives in the functional modules;
this class exists so the pipeline composes with the usual get_params /
set_params / clone machinery.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import dpp, features, similarity, training
from .corpus import Cluster, check_cluster
from .errors import ValidationError


class DppSummarizer(BaseEstimator):
    """Extractive summarizer: learned qualities, similarity-repelled selection.

    Parameters
    ----------
    budget_words : summary length budget in tokens.
    lambda_c : interpolation weight on external (classifier) similarity
        when ``similarity_mode="combined"``.
    similarity_mode : "cosine" or "combined".
    caps_provider : callable topic_id -> (n, n) similarity ndarray;
        required for combined mode.
    learning_rate, epochs, seed : gradient-ascent settings.
    oracle_budget : word budget for oracle label construction.
    exact : use exhaustive search instead of greedy (n <= 20 only).
    """

    def __init__(
        self,
        budget_words: int = 100,
        lambda_c: float = 0.2,
        similarity_mode: str = "cosine",
        caps_provider: Callable[[str], np.ndarray] | None = None,
        learning_rate: float = training.DEFAULT_LEARNING_RATE,
        epochs: int = training.DEFAULT_EPOCHS,
        seed: int = 0,
        oracle_budget: int = training.DEFAULT_ORACLE_BUDGET,
        exact: bool = False,
    ):
        self.budget_words = budget_words
        self.lambda_c = lambda_c
        self.similarity_mode = similarity_mode
        self.caps_provider = caps_provider
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.seed = seed
        self.oracle_budget = oracle_budget
        self.exact = exact

    def _validate_params(self) -> None:
        if self.budget_words < 1:
            raise ValidationError(f"budget_words must be >= 1, got {self.budget_words}")
        if not 0.0 <= self.lambda_c <= 1.0:
            raise ValidationError(f"lambda_c must be in [0, 1], got {self.lambda_c}")
        if self.similarity_mode not in ("cosine", "combined"):
            raise ValidationError(
                f"similarity_mode must be 'cosine' or 'combined', got {self.similarity_mode!r}"
            )
        if self.similarity_mode == "combined" and self.caps_provider is None:
            raise ValidationError("combined mode needs a caps_provider")

    def fit(self, X: Sequence[Cluster], y: Sequence[training.OracleLabel] | None = None):
        """Learn quality weights from clusters (oracle labels built from
        references unless ``y`` supplies them)."""
        self._validate_params()
        clusters = list(X)
        if not clusters:
            raise ValidationError("fit needs at least one cluster")
        for cluster in clusters:
            check_cluster(cluster)
        data = training.build_training_data(
            clusters, budget_words=self.oracle_budget, labels=y
        )
        config = training.TrainConfig(
            learning_rate=self.learning_rate, epochs=self.epochs, seed=self.seed
        )
        self.model_, self.history_ = training.train_dpp(data, config)
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "model_"):
            raise NotFittedError("DppSummarizer is not fitted; call fit first")

    def _similarity_for(self, cluster: Cluster) -> np.ndarray:
        s = similarity.cosine_matrix(features.tfidf_vectors(cluster))
        if self.similarity_mode == "combined":
            caps = similarity.validate_similarity(
                self.caps_provider(cluster.topic_id), f"caps[{cluster.topic_id}]"
            )
            if caps.shape[0] != cluster.n:
                raise ValidationError(
                    f"caps matrix for {cluster.topic_id!r} has size {caps.shape[0]}, "
                    f"cluster has {cluster.n} sentences"
                )
            s = similarity.project_psd(similarity.combine(s, caps, self.lambda_c))
        return s

    def select(self, cluster: Cluster) -> dpp.SummarySelection:
        """MAP inference for one cluster."""
        self._check_fitted()
        check_cluster(cluster)
        q = self.model_.qualities(features.feature_matrix(cluster))
        ensemble = dpp.build_l(q, self._similarity_for(cluster))
        infer = dpp.exhaustive_map if self.exact else dpp.greedy_map
        return infer(ensemble, cluster.sentences, self.budget_words)

    def predict(self, X: Sequence[Cluster]) -> list[dpp.SummarySelection]:
        return [self.select(cluster) for cluster in X]

    def summarize(self, cluster: Cluster) -> str:
        """Summary text: selected sentences in selection order."""
        selection = self.select(cluster)
        return "\n".join(cluster.sentences[i].raw for i in selection.indices)
