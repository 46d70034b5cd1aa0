"""Training loop, evaluation, and checkpoint I/O."""

from __future__ import annotations

import logging
import random
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

import numpy as np
import torch

from .config import ModelConfig, TrainSettings
from .data import PairBatch, PairRecord, make_batch
from .model import RedundancyCapsNet
from .vocab import Vocabulary

logger = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1


def set_seed(seed: int) -> None:
    random.seed(seed)
    np.random.seed(seed % (2 ** 32))
    torch.manual_seed(seed)


def split_records(
    records: Sequence[PairRecord], val_fraction: float, seed: int
) -> tuple[list[PairRecord], list[PairRecord]]:
    """Deterministic shuffle-and-split into (train, held-out)."""
    order = list(range(len(records)))
    random.Random(seed).shuffle(order)
    n_val = int(len(records) * val_fraction)
    val = [records[i] for i in order[:n_val]]
    train = [records[i] for i in order[n_val:]]
    return train, val


def iter_batches(
    records: Sequence[PairRecord],
    vocab: Vocabulary,
    max_len: int,
    batch_size: int,
    shuffle_rng: random.Random | None = None,
):
    order = list(range(len(records)))
    if shuffle_rng is not None:
        shuffle_rng.shuffle(order)
    for start in range(0, len(order), batch_size):
        chunk = [records[i] for i in order[start : start + batch_size]]
        yield make_batch(chunk, vocab, max_len)


@torch.no_grad()
def evaluate_accuracy(
    model: RedundancyCapsNet,
    records: Sequence[PairRecord],
    vocab: Vocabulary,
    batch_size: int = 256,
) -> float:
    """Fraction of pairs with thresholded probability equal to the label."""
    if not records:
        return float("nan")
    model.eval()
    correct = 0
    for batch in iter_batches(records, vocab, model.config.max_len, batch_size):
        prob = model.forward(batch)
        pred = (prob >= 0.5).to(torch.int64)
        correct += int((pred == batch.labels.to(torch.int64)).sum())
    return correct / len(records)


def train(
    records: Sequence[PairRecord],
    config: ModelConfig = ModelConfig(),
    settings: TrainSettings = TrainSettings(),
    vocab: Vocabulary | None = None,
) -> tuple[RedundancyCapsNet, Vocabulary, dict]:
    """Minibatch training with a fixed seed; returns (model, vocab, metrics).

    Metrics hold per-step losses, per-epoch train/held-out accuracy, and
    the split sizes, so runs are comparable and reproducible.
    """
    config.validate()
    settings.validate()
    if not records:
        raise ValueError("no training pairs supplied")
    set_seed(settings.seed)
    if vocab is None:
        vocab = Vocabulary.build(
            (list(r.a) + list(r.b) for r in records), config.vocab_size
        )
    train_records, val_records = split_records(
        records, settings.val_fraction, settings.seed
    )
    model = RedundancyCapsNet(config, len(vocab))
    optimizer = torch.optim.Adam(model.parameters(), lr=settings.learning_rate)
    shuffle_rng = random.Random(settings.seed + 1)

    metrics: dict = {
        "losses": [],
        "epoch_train_accuracy": [],
        "epoch_val_accuracy": [],
        "n_train": len(train_records),
        "n_val": len(val_records),
    }
    step = 0
    for epoch in range(settings.epochs):
        model.train()
        for batch in iter_batches(
            train_records, vocab, config.max_len, settings.batch_size, shuffle_rng
        ):
            optimizer.zero_grad()
            total, bce, recon = model.loss(batch)
            total.backward()
            optimizer.step()
            metrics["losses"].append(float(total.detach()))
            if step % settings.log_every == 0:
                logger.info(
                    "epoch %d step %d loss %.4f (bce %.4f recon %.2f)",
                    epoch, step, float(total.detach()), float(bce.detach()),
                    float(recon.detach()),
                )
            step += 1
        train_acc = evaluate_accuracy(model, train_records, vocab)
        val_acc = evaluate_accuracy(model, val_records, vocab)
        metrics["epoch_train_accuracy"].append(train_acc)
        metrics["epoch_val_accuracy"].append(val_acc)
        logger.info(
            "epoch %d done: train accuracy %.4f, held-out accuracy %s",
            epoch, train_acc, f"{val_acc:.4f}" if val_acc == val_acc else "n/a",
        )
    return model, vocab, metrics


def save_checkpoint(
    path: str | Path,
    model: RedundancyCapsNet,
    vocab: Vocabulary,
    metrics: dict | None = None,
) -> None:
    payload = {
        "format_version": CHECKPOINT_VERSION,
        "config": asdict(model.config),
        "vocab": list(vocab.words),
        "state_dict": model.state_dict(),
        "metrics": metrics or {},
    }
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    torch.save(payload, tmp)
    tmp.replace(path)


def load_checkpoint(path: str | Path) -> tuple[RedundancyCapsNet, Vocabulary, dict]:
    payload = torch.load(Path(path), map_location="cpu", weights_only=False)
    version = payload.get("format_version")
    if version != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version {version}")
    config_values = dict(payload["config"])
    config_values["filter_sizes"] = tuple(config_values["filter_sizes"])
    config = ModelConfig(**config_values)
    vocab = Vocabulary(payload["vocab"][3:])  # specials re-added by constructor
    model = RedundancyCapsNet(config, len(vocab))
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, vocab, payload.get("metrics", {})
