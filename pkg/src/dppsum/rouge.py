"""In-house ROUGE scoring: R-1, R-2, R-L, and R-SU4.

Counts are clipped per n-gram against each reference; with multiple
references the score of the best-F reference is reported (no jackknifing).
R-SU4 counts skip-bigram pairs (i < j, j - i <= 4) together with unigrams.
Scores are point estimates; the official toolkit's weighted-LCS and
bootstrap confidence machinery are out of scope.

Stemming (classic Porter) is optional and defaults to on for evaluation,
off for pair mining.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from . import _porter
from .errors import ValidationError

SKIP_DISTANCE = 4


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _score(matches: int, candidate_total: int, reference_total: int) -> RougeScore:
    p = matches / candidate_total if candidate_total else 0.0
    r = matches / reference_total if reference_total else 0.0
    return RougeScore(precision=p, recall=r, f1=_f1(p, r))


def _prepare(
    candidate: Sequence[str],
    references: Sequence[Sequence[str]],
    stem: bool,
    length_limit: int | None,
) -> tuple[list[str], list[list[str]]]:
    if not references:
        raise ValidationError("ROUGE needs at least one reference")
    cand = list(candidate)
    if length_limit is not None:
        cand = cand[:length_limit]
    refs = [list(r) for r in references]
    if stem:
        cand = [_porter.stem(t) for t in cand]
        refs = [[_porter.stem(t) for t in r] for r in refs]
    return cand, refs


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _clipped_matches(cand: Counter, ref: Counter) -> int:
    return sum(min(c, ref[g]) for g, c in cand.items() if g in ref)


def _best_by_f(scores: list[RougeScore]) -> RougeScore:
    best = scores[0]
    for s in scores[1:]:
        if s.f1 > best.f1:
            best = s
    return best


def rouge_n(
    candidate: Sequence[str],
    references: Sequence[Sequence[str]],
    n: int,
    stem: bool = False,
    length_limit: int | None = None,
) -> RougeScore:
    """Clipped n-gram overlap, best reference by F-score."""
    if n not in (1, 2):
        raise ValidationError(f"rouge_n supports n in {{1, 2}}, got {n}")
    cand, refs = _prepare(candidate, references, stem, length_limit)
    cand_grams = _ngrams(cand, n)
    cand_total = max(len(cand) - n + 1, 0)
    scores = []
    for ref in refs:
        ref_grams = _ngrams(ref, n)
        matches = _clipped_matches(cand_grams, ref_grams)
        scores.append(_score(matches, cand_total, max(len(ref) - n + 1, 0)))
    return _best_by_f(scores)


def skip_bigrams(tokens: Sequence[str], max_distance: int = SKIP_DISTANCE) -> Counter:
    """Multiset of ordered pairs (i < j) with j - i <= max_distance."""
    grams: Counter = Counter()
    for i in range(len(tokens)):
        for j in range(i + 1, min(i + max_distance, len(tokens) - 1) + 1):
            grams[(tokens[i], tokens[j])] += 1
    return grams


def rouge_su4(
    candidate: Sequence[str],
    references: Sequence[Sequence[str]],
    stem: bool = False,
    length_limit: int | None = None,
) -> RougeScore:
    """Skip-bigrams (gap <= 4) plus unigrams, clipped, best-F reference."""
    cand, refs = _prepare(candidate, references, stem, length_limit)
    cand_units = skip_bigrams(cand) + Counter((t,) for t in cand)
    cand_total = sum(cand_units.values())
    scores = []
    for ref in refs:
        ref_units = skip_bigrams(ref) + Counter((t,) for t in ref)
        matches = _clipped_matches(cand_units, ref_units)
        scores.append(_score(matches, cand_total, sum(ref_units.values())))
    return _best_by_f(scores)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Longest common subsequence length via the classic DP recurrence."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0] * (len(b) + 1)
        for j, y in enumerate(b, start=1):
            if x == y:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return prev[-1]


def rouge_l(
    candidate: Sequence[str],
    references: Sequence[Sequence[str]],
    stem: bool = False,
    length_limit: int | None = None,
) -> RougeScore:
    """LCS-based precision/recall, best-F reference."""
    cand, refs = _prepare(candidate, references, stem, length_limit)
    scores = []
    for ref in refs:
        lcs = lcs_length(cand, ref)
        scores.append(_score(lcs, len(cand), len(ref)))
    return _best_by_f(scores)
