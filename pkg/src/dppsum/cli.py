"""Command-line pipeline.

Subcommands mirror the pipeline stages: ``oracle``, ``train``,
``summarize``, ``evaluate``, ``make-pairs``, ``fuse-sim``, ``heatmap``.
Option precedence is flags > ``--config`` JSON file > built-in defaults.
Exit codes: 0 ok, 2 validation, 3 numerical, 4 I/O.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import dpp, features, pairgen, rouge, similarity, training
from .corpus import load_cluster, load_clusters, tokenize
from .errors import NumericalError, ValidationError

DEFAULTS = {
    "budget": 100,
    "lambda_c": 0.2,
    "threshold": pairgen.DEFAULT_THRESHOLD,
    "lr": training.DEFAULT_LEARNING_RATE,
    "epochs": training.DEFAULT_EPOCHS,
    "seed": 0,
    "neg_ratio": 1.0,
    "max_n": 200,
}


def _resolve(args: argparse.Namespace, key: str, command_default=None):
    """flags > config file > defaults."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    config = getattr(args, "_config", {})
    if key in config:
        return config[key]
    if command_default is not None:
        return command_default
    return DEFAULTS.get(key)


def _load_config(args: argparse.Namespace) -> None:
    config = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        config = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(config, dict):
            raise ValidationError(f"{path}: config file must hold a JSON object")
    args._config = config


def _clusters_from_args(args: argparse.Namespace):
    if getattr(args, "cluster", None):
        return [load_cluster(p) for p in args.cluster]
    if getattr(args, "clusters_dir", None):
        return load_clusters(args.clusters_dir)
    raise ValidationError("provide --cluster or --clusters-dir")


def _cmd_oracle(args: argparse.Namespace) -> int:
    budget = int(_resolve(args, "budget"))
    clusters = _clusters_from_args(args)
    labels = [training.oracle_labels(c, budget) for c in clusters]
    payload = [
        {"topic_id": label.topic_id, "indices": list(label.indices)}
        for label in labels
    ]
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    clusters = _clusters_from_args(args)
    data = training.build_training_data(clusters, int(_resolve(args, "budget")))
    config = training.TrainConfig(
        learning_rate=float(_resolve(args, "lr")),
        epochs=int(_resolve(args, "epochs")),
        seed=int(_resolve(args, "seed")),
    )
    model, history = training.train_dpp(data, config)
    model.save(args.out)
    for epoch, ll in enumerate(history):
        print(f"epoch {epoch} log-likelihood {ll:.6f}")
    print(f"model written to {args.out}")
    return 0


def _caps_matrix(args: argparse.Namespace, cluster) -> np.ndarray:
    caps, topic = similarity.read_similarity_file(args.caps)
    if caps.shape[0] != cluster.n:
        raise ValidationError(
            f"caps file {args.caps} has n={caps.shape[0]} but cluster "
            f"{cluster.topic_id!r} has {cluster.n} sentences"
        )
    if topic and topic != cluster.topic_id:
        raise ValidationError(
            f"caps file topic {topic!r} does not match cluster {cluster.topic_id!r}"
        )
    return caps


def _cmd_summarize(args: argparse.Namespace) -> int:
    cluster = load_cluster(args.cluster)
    model = training.QualityModel.load(args.model)
    sim_mode = _resolve(args, "sim", "cosine")
    s = similarity.cosine_matrix(features.tfidf_vectors(cluster))
    if sim_mode == "combined":
        if not args.caps:
            raise ValidationError("--sim combined requires --caps <file>")
        caps = _caps_matrix(args, cluster)
        s = similarity.project_psd(
            similarity.combine(s, caps, float(_resolve(args, "lambda_c")))
        )
    elif sim_mode != "cosine":
        raise ValidationError(f"--sim must be cosine or combined, got {sim_mode!r}")
    q = model.qualities(features.feature_matrix(cluster))
    ensemble = dpp.build_l(q, s)
    infer = dpp.exhaustive_map if args.exact else dpp.greedy_map
    selection = infer(ensemble, cluster.sentences, int(_resolve(args, "budget")))
    lines = [
        f"topic: {cluster.topic_id}",
        "indices: " + " ".join(str(i) for i in selection.indices),
        f"words: {selection.word_count}",
        f"log_prob: {selection.log_prob:.6f}",
    ]
    lines += [f"[{i}] {cluster.sentences[i].raw}" for i in selection.indices]
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        summary = "\n".join(cluster.sentences[i].raw for i in selection.indices)
        Path(args.out).write_text(summary + "\n", encoding="utf-8")
    return 0


_METRICS = ("R-1", "R-2", "R-SU4")


def _cmd_evaluate(args: argparse.Namespace) -> int:
    clusters = load_clusters(args.clusters_dir)
    stem = _resolve(args, "stem", True)
    limit = int(_resolve(args, "budget"))
    run_dir = Path(args.run_dir)
    rows: list[list[str]] = []
    sums: dict[str, np.ndarray] = {m: np.zeros(3) for m in _METRICS}
    counted = 0
    for cluster in clusters:
        if not cluster.references:
            raise ValidationError(f"cluster {cluster.topic_id!r} has no references")
        summary_path = run_dir / f"{cluster.topic_id}.txt"
        if not summary_path.exists():
            print(
                f"warning: no summary for topic {cluster.topic_id}; "
                "excluded from averages",
                file=sys.stderr,
            )
            rows.append([cluster.topic_id, "MISSING", "", "", ""])
            continue
        candidate = tokenize(summary_path.read_text(encoding="utf-8"))
        refs = [list(r) for r in cluster.references]
        scores = {
            "R-1": rouge.rouge_n(candidate, refs, n=1, stem=stem, length_limit=limit),
            "R-2": rouge.rouge_n(candidate, refs, n=2, stem=stem, length_limit=limit),
            "R-SU4": rouge.rouge_su4(candidate, refs, stem=stem, length_limit=limit),
        }
        for metric in _METRICS:
            sc = scores[metric]
            rows.append(
                [cluster.topic_id, metric, f"{sc.precision:.4f}", f"{sc.recall:.4f}", f"{sc.f1:.4f}"]
            )
            sums[metric] += (sc.precision, sc.recall, sc.f1)
        counted += 1
    if counted:
        for metric in _METRICS:
            p, r, f = sums[metric] / counted
            rows.append(["AVERAGE", metric, f"{p:.4f}", f"{r:.4f}", f"{f:.4f}"])
    out = sys.stdout
    if args.out:
        out = Path(args.out).open("w", encoding="utf-8", newline="")
    writer = csv.writer(out)
    writer.writerow(["topic_id", "metric", "precision", "recall", "f1"])
    writer.writerows(rows)
    if args.out:
        out.close()
    return 0


def _cmd_make_pairs(args: argparse.Namespace) -> int:
    n_pos, n_neg = pairgen.mine_pairs(
        args.input,
        args.out,
        threshold=float(_resolve(args, "threshold")),
        seed=int(_resolve(args, "seed")),
        negative_ratio=float(_resolve(args, "neg_ratio")),
        stem=_resolve(args, "stem", False),
    )
    print(f"wrote {n_pos} positive and {n_neg} negative pairs to {args.out}")
    return 0


def _cmd_fuse_sim(args: argparse.Namespace) -> int:
    cluster = load_cluster(args.cluster)
    cos = similarity.cosine_matrix(features.tfidf_vectors(cluster))
    caps = _caps_matrix(args, cluster)
    fused = similarity.project_psd(
        similarity.combine(cos, caps, float(_resolve(args, "lambda_c")))
    )
    similarity.write_similarity_file(fused, args.out, cluster.topic_id)
    print(f"fused similarity written to {args.out}")
    return 0


def _cmd_heatmap(args: argparse.Namespace) -> int:
    if bool(args.cluster) == bool(args.sim_file):
        raise ValidationError("provide exactly one of --cluster or --sim-file")
    if args.cluster:
        cluster = load_cluster(args.cluster)
        s = similarity.cosine_matrix(features.tfidf_vectors(cluster))
    else:
        s, _ = similarity.read_similarity_file(args.sim_file)
    csv_path, pgm_path = similarity.emit_heatmap(
        s, args.out, int(_resolve(args, "max_n"))
    )
    print(f"heatmap written to {csv_path} and {pgm_path}")
    return 0


def _add_config_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with default option values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dppsum",
        description="Extractive multi-document summarization with a DPP",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("oracle", help="build oracle extractive labels")
    p.add_argument("--cluster", action="append", help="cluster file (repeatable)")
    p.add_argument("--clusters-dir")
    p.add_argument("--budget", type=int)
    p.add_argument("--out")
    _add_config_flag(p)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("train", help="train quality weights by DPP MLE")
    p.add_argument("--cluster", action="append")
    p.add_argument("--clusters-dir")
    p.add_argument("--budget", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="model JSON output path")
    _add_config_flag(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("summarize", help="summarize one cluster")
    p.add_argument("--cluster", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--sim", choices=("cosine", "combined"))
    p.add_argument("--caps", help="similarity file for combined mode")
    p.add_argument("--lambda-c", dest="lambda_c", type=float)
    p.add_argument("--budget", type=int)
    p.add_argument("--exact", action="store_true", help="exhaustive search (n <= 20)")
    p.add_argument("--out", help="write plain summary text here")
    _add_config_flag(p)
    p.set_defaults(func=_cmd_summarize)

    p = sub.add_parser("evaluate", help="score summaries against references")
    p.add_argument("--run-dir", required=True, help="directory of <topic_id>.txt files")
    p.add_argument("--clusters-dir", required=True)
    p.add_argument("--budget", type=int, help="truncation length (default 100)")
    p.add_argument("--stem", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--out", help="CSV output path (default stdout)")
    _add_config_flag(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("make-pairs", help="mine redundancy pairs from articles")
    p.add_argument("--input", required=True, help="articles JSONL")
    p.add_argument("--out", required=True, help="pairs JSONL output")
    p.add_argument("--threshold", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--neg-ratio", dest="neg_ratio", type=float)
    p.add_argument("--stem", action=argparse.BooleanOptionalAction, default=None)
    _add_config_flag(p)
    p.set_defaults(func=_cmd_make_pairs)

    p = sub.add_parser("fuse-sim", help="fuse cosine with classifier similarity")
    p.add_argument("--cluster", required=True)
    p.add_argument("--caps", required=True)
    p.add_argument("--lambda-c", dest="lambda_c", type=float)
    p.add_argument("--out", required=True)
    _add_config_flag(p)
    p.set_defaults(func=_cmd_fuse_sim)

    p = sub.add_parser("heatmap", help="emit similarity heatmap (CSV + PGM)")
    p.add_argument("--cluster")
    p.add_argument("--sim-file")
    p.add_argument("--max-n", dest="max_n", type=int)
    p.add_argument("--out", required=True, help="output base path")
    _add_config_flag(p)
    p.set_defaults(func=_cmd_heatmap)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _load_config(args)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
