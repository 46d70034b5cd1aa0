"""Command line: ``train``, ``eval``, and ``score-cluster``.

Flag style and exit codes mirror the summarizer CLI: 0 ok, 2 validation,
3 numerical, 4 I/O.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ModelConfig, TrainSettings
from .data import load_pairs
from .train import evaluate_accuracy, load_checkpoint, save_checkpoint, train
from .scoring import export_similarity


def _model_config(args: argparse.Namespace) -> ModelConfig:
    defaults = ModelConfig()
    return ModelConfig(
        embedding_dim=args.embedding_dim or defaults.embedding_dim,
        max_len=args.max_len or defaults.max_len,
        filter_sizes=tuple(args.filter_sizes or defaults.filter_sizes),
        filters_per_size=args.filters or defaults.filters_per_size,
        num_capsules=args.capsules or defaults.num_capsules,
        capsule_dim=args.capsule_dim or defaults.capsule_dim,
        routing_iters=defaults.routing_iters if args.routing_iters is None else args.routing_iters,
        lambda_recon=defaults.lambda_recon if args.lambda_recon is None else args.lambda_recon,
        vocab_size=args.vocab_size or defaults.vocab_size,
        recon_hidden=args.recon_hidden or defaults.recon_hidden,
    )


def _cmd_train(args: argparse.Namespace) -> int:
    records = load_pairs(args.pairs)
    settings = TrainSettings(
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        seed=args.seed,
        val_fraction=args.val_frac,
    )
    model, vocab, metrics = train(records, _model_config(args), settings)
    save_checkpoint(args.out, model, vocab, metrics)
    final_val = metrics["epoch_val_accuracy"][-1]
    print(
        f"trained on {metrics['n_train']} pairs "
        f"(held-out {metrics['n_val']}), final train accuracy "
        f"{metrics['epoch_train_accuracy'][-1]:.4f}, held-out accuracy "
        f"{final_val if final_val == final_val else float('nan'):.4f}"
    )
    print(f"checkpoint written to {args.out}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    model, vocab, _ = load_checkpoint(args.model)
    records = load_pairs(args.pairs)
    accuracy = evaluate_accuracy(model, records, vocab, batch_size=args.batch_size)
    majority = max(
        sum(r.label for r in records), sum(1 - r.label for r in records)
    ) / len(records)
    print(f"pairs: {len(records)}")
    print(f"accuracy: {accuracy:.4f}")
    print(f"majority_baseline: {majority:.4f}")
    return 0


def _cmd_score_cluster(args: argparse.Namespace) -> int:
    model, vocab, _ = load_checkpoint(args.model)
    matrix = export_similarity(
        model, vocab, args.cluster, args.out, batch_size=args.batch_size
    )
    print(f"scored {matrix.shape[0]} sentences -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capsnet",
        description="Capsule-network sentence-redundancy classifier",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train on mined pair JSONL")
    p.add_argument("--pairs", required=True)
    p.add_argument("--out", required=True, help="checkpoint output path")
    p.add_argument("--epochs", type=int, default=3)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--val-frac", type=float, default=0.1)
    p.add_argument("--embedding-dim", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--filter-sizes", type=int, nargs="+")
    p.add_argument("--filters", type=int, help="filters per size")
    p.add_argument("--capsules", type=int)
    p.add_argument("--capsule-dim", type=int)
    p.add_argument("--routing-iters", type=int)
    p.add_argument("--lambda-recon", type=float)
    p.add_argument("--vocab-size", type=int)
    p.add_argument("--recon-hidden", type=int)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="accuracy on a pair JSONL file")
    p.add_argument("--pairs", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--batch-size", type=int, default=256)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("score-cluster", help="export a similarity matrix file")
    p.add_argument("--cluster", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--batch-size", type=int, default=256)
    p.set_defaults(func=_cmd_score_cluster)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
