"""Model and training configuration.

Defaults are the reference hyperparameters: 300-dim embeddings, sentences
padded to 44 tokens, five filter sizes (3..7) at 100 filters each, 12
capsules of dimension 30, 3 routing iterations, reconstruction weight
5e-5, and a 50K-word vocabulary cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict


@dataclass(frozen=True)
class ModelConfig:
    embedding_dim: int = 300
    max_len: int = 44
    filter_sizes: tuple[int, ...] = (3, 4, 5, 6, 7)
    filters_per_size: int = 100
    num_capsules: int = 12
    capsule_dim: int = 30
    routing_iters: int = 3
    lambda_recon: float = 5e-5
    vocab_size: int = 50_000
    recon_hidden: int = 300

    @property
    def encoder_dim(self) -> int:
        """D = (number of filter sizes) * filters per size."""
        return len(self.filter_sizes) * self.filters_per_size

    def validate(self) -> "ModelConfig":
        values = asdict(self)
        for key in (
            "embedding_dim", "max_len", "filters_per_size", "num_capsules",
            "capsule_dim", "vocab_size", "recon_hidden",
        ):
            if values[key] < 1:
                raise ValueError(f"{key} must be positive, got {values[key]}")
        if self.routing_iters < 0:
            raise ValueError("routing_iters must be >= 0")
        if not self.filter_sizes:
            raise ValueError("at least one filter size is required")
        if self.lambda_recon < 0:
            raise ValueError("lambda_recon must be >= 0")
        return self


@dataclass(frozen=True)
class TrainSettings:
    epochs: int = 3
    batch_size: int = 64
    learning_rate: float = 1e-3
    seed: int = 0
    val_fraction: float = 0.1
    log_every: int = 50

    def validate(self) -> "TrainSettings":
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ValueError("val_fraction must be in [0, 1)")
        return self


# A small-footprint configuration for unit tests and smoke runs.
TINY_CONFIG = ModelConfig(
    embedding_dim=32,
    max_len=16,
    filter_sizes=(2, 3),
    filters_per_size=8,
    num_capsules=4,
    capsule_dim=8,
    routing_iters=2,
    vocab_size=500,
    recon_hidden=32,
)
