"""Mining redundant sentence pairs from (article, abstract) data.

For every abstract sentence the best-matching article sentence by the
averaged R-1/R-2/R-L F-score becomes a positive pair when the score clears
the threshold; negatives are random sentence pairs from the same article.
Input is JSONL with one object per article:

    {"id": "...", "article": ["sentence", ...], "abstract": ["sentence", ...]}

Output is JSONL pair records, the interchange format consumed by the
redundancy classifier:

    {"a": [tokens...], "b": [tokens...], "label": 0|1,
     "score": float (positives only), "source_id": "..."}
"""

from __future__ import annotations

import itertools
import json
import logging
import random
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import tokenize
from .errors import ParseError, ValidationError
from .rouge import rouge_l, rouge_n

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.25


@dataclass(frozen=True)
class PairExample:
    sentence_a: tuple[str, ...]  # source (article) sentence
    sentence_b: tuple[str, ...]  # for positives: the abstract sentence
    label: int
    score: float | None
    source_id: str

    def to_json(self) -> str:
        record = {
            "a": list(self.sentence_a),
            "b": list(self.sentence_b),
            "label": self.label,
            "source_id": self.source_id,
        }
        if self.score is not None:
            record["score"] = self.score
        return json.dumps(record, ensure_ascii=False)


def match_score(source: Sequence[str], summary: Sequence[str], stem: bool = False) -> float:
    """Mean of the R-1, R-2, and R-L F-scores between two sentences."""
    refs = [list(summary)]
    r1 = rouge_n(source, refs, n=1, stem=stem).f1
    r2 = rouge_n(source, refs, n=2, stem=stem).f1
    rl = rouge_l(source, refs, stem=stem).f1
    return (r1 + r2 + rl) / 3.0


def extract_positive_pairs(
    article_sentences: Sequence[Sequence[str]],
    abstract_sentences: Sequence[Sequence[str]],
    threshold: float = DEFAULT_THRESHOLD,
    stem: bool = False,
    source_id: str = "",
) -> list[PairExample]:
    """Best article match per abstract sentence, kept when score >= threshold."""
    if not 0.0 <= threshold <= 1.0:
        raise ValidationError(f"threshold must be in [0, 1], got {threshold}")
    pairs: list[PairExample] = []
    if not article_sentences:
        return pairs
    for summary_sent in abstract_sentences:
        best_idx = -1
        best = -1.0
        for idx, source_sent in enumerate(article_sentences):
            score = match_score(source_sent, summary_sent, stem=stem)
            if score > best:
                best = score
                best_idx = idx
        if best >= threshold:
            pairs.append(
                PairExample(
                    sentence_a=tuple(article_sentences[best_idx]),
                    sentence_b=tuple(summary_sent),
                    label=1,
                    score=best,
                    source_id=source_id,
                )
            )
    return pairs


def sample_negative_pairs(
    article_sentences: Sequence[Sequence[str]],
    count: int,
    seed: int,
    source_id: str = "",
) -> list[PairExample]:
    """Distinct unordered sentence pairs drawn uniformly with a seeded RNG."""
    n = len(article_sentences)
    if n < 2:
        raise ValidationError("negative sampling needs an article with >= 2 sentences")
    all_pairs = list(itertools.combinations(range(n), 2))
    if count > len(all_pairs):
        logger.warning(
            "requested %d negatives but article %r has only %d pairs; emitting all",
            count, source_id, len(all_pairs),
        )
        chosen = all_pairs
    else:
        chosen = random.Random(seed).sample(all_pairs, count)
    return [
        PairExample(
            sentence_a=tuple(article_sentences[i]),
            sentence_b=tuple(article_sentences[j]),
            label=0,
            score=None,
            source_id=source_id,
        )
        for i, j in chosen
    ]


def _article_seed(global_seed: int, article_id: str) -> int:
    return global_seed ^ zlib.crc32(article_id.encode("utf-8"))


def iter_articles(path: str | Path) -> Iterable[tuple[str, list[list[str]], list[list[str]]]]:
    """Yield (id, article token lists, abstract token lists) per JSONL line."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc.msg}") from exc
            for key in ("id", "article", "abstract"):
                if key not in record:
                    raise ParseError(f"{path}: line {lineno}: missing field {key!r}")
            article = [tokenize(s) for s in record["article"]]
            abstract = [tokenize(s) for s in record["abstract"]]
            article = [s for s in article if s]
            abstract = [s for s in abstract if s]
            yield str(record["id"]), article, abstract


def mine_pairs(
    input_path: str | Path,
    output_path: str | Path,
    threshold: float = DEFAULT_THRESHOLD,
    seed: int = 0,
    negative_ratio: float = 1.0,
    stem: bool = False,
) -> tuple[int, int]:
    """Run pair mining over a JSONL corpus; returns (positives, negatives)."""
    n_pos = 0
    n_neg = 0
    output_path = Path(output_path)
    with output_path.open("w", encoding="utf-8") as out:
        for article_id, article, abstract in iter_articles(input_path):
            positives = extract_positive_pairs(
                article, abstract, threshold=threshold, stem=stem, source_id=article_id
            )
            want = int(round(len(positives) * negative_ratio))
            negatives: list[PairExample] = []
            if want > 0 and len(article) >= 2:
                negatives = sample_negative_pairs(
                    article, want, _article_seed(seed, article_id), source_id=article_id
                )
            for pair in itertools.chain(positives, negatives):
                out.write(pair.to_json() + "\n")
            n_pos += len(positives)
            n_neg += len(negatives)
    return n_pos, n_neg
