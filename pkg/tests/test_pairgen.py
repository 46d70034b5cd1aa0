import itertools
import json

import pytest

from dppsum.corpus import tokenize
from dppsum.errors import ParseError, ValidationError
from dppsum.pairgen import (
    extract_positive_pairs,
    match_score,
    mine_pairs,
    sample_negative_pairs,
)
from dppsum.rouge import rouge_l, rouge_n

ARTICLE = [
    tokenize("The storm closed every school in the city."),
    tokenize("Eight people died in weather-related crashes."),
    tokenize("The mayor promised that plows would run all night."),
]


class TestPositivePairs:
    def test_verbatim_match_scores_one(self):
        abstract = [list(ARTICLE[1])]
        pairs = extract_positive_pairs(ARTICLE, abstract, threshold=0.25)
        assert len(pairs) == 1
        assert pairs[0].label == 1
        assert pairs[0].score == pytest.approx(1.0)
        assert pairs[0].sentence_a == tuple(ARTICLE[1])

    def test_below_threshold_emits_nothing(self):
        abstract = [tokenize("completely unrelated gardening advice")]
        assert extract_positive_pairs(ARTICLE, abstract, threshold=0.25) == []

    def test_best_match_agrees_with_rouge_oracle(self):
        abstract = [tokenize("the storm closed schools across the city")]
        pairs = extract_positive_pairs(ARTICLE, abstract, threshold=0.1)
        assert len(pairs) == 1
        # Recompute the averaged score for every article sentence directly.
        scores = []
        for sent in ARTICLE:
            refs = [abstract[0]]
            mean = (
                rouge_n(sent, refs, n=1).f1
                + rouge_n(sent, refs, n=2).f1
                + rouge_l(sent, refs).f1
            ) / 3.0
            scores.append(mean)
        best = max(range(3), key=lambda i: scores[i])
        assert pairs[0].sentence_a == tuple(ARTICLE[best])
        assert pairs[0].score == pytest.approx(max(scores))

    def test_empty_article(self):
        assert extract_positive_pairs([], [tokenize("anything")], 0.25) == []

    def test_bad_threshold(self):
        with pytest.raises(ValidationError):
            extract_positive_pairs(ARTICLE, [], threshold=1.5)

    def test_all_positives_clear_threshold(self):
        abstract = [
            tokenize("the storm closed schools"),
            tokenize("plows ran all night, the mayor said"),
            tokenize("nothing in common whatsoever xylophone"),
        ]
        pairs = extract_positive_pairs(ARTICLE, abstract, threshold=0.2)
        assert all(p.score >= 0.2 for p in pairs)


class TestNegativePairs:
    def test_two_sentence_article_forces_single_pair(self):
        two = ARTICLE[:2]
        pairs = sample_negative_pairs(two, count=1, seed=0)
        assert len(pairs) == 1
        assert pairs[0].label == 0
        assert pairs[0].score is None
        assert {tuple(pairs[0].sentence_a), tuple(pairs[0].sentence_b)} == {
            tuple(two[0]), tuple(two[1]),
        }

    def test_same_seed_same_output(self):
        sentences = [[f"w{i}", "x"] for i in range(10)]
        a = sample_negative_pairs(sentences, count=5, seed=7)
        b = sample_negative_pairs(sentences, count=5, seed=7)
        assert a == b

    def test_distinct_pairs_no_self_pairs(self):
        sentences = [[f"w{i}", "x"] for i in range(10)]
        pairs = sample_negative_pairs(sentences, count=5, seed=7)
        assert len(pairs) == 5
        seen = {(p.sentence_a, p.sentence_b) for p in pairs}
        assert len(seen) == 5
        for p in pairs:
            assert p.sentence_a != p.sentence_b

    def test_overflow_emits_all_pairs_with_warning(self, caplog):
        sentences = [[f"w{i}"] for i in range(4)]
        with caplog.at_level("WARNING"):
            pairs = sample_negative_pairs(sentences, count=100, seed=1)
        assert len(pairs) == len(list(itertools.combinations(range(4), 2)))
        assert "emitting all" in caplog.text

    def test_too_small_article(self):
        with pytest.raises(ValidationError):
            sample_negative_pairs([["only"]], count=1, seed=0)


class TestMinePairs:
    def _write_corpus(self, tmp_path):
        records = [
            {
                "id": "art-1",
                "article": [
                    "The storm closed every school in the city.",
                    "Eight people died in crashes.",
                    "Plows ran through the night.",
                    "The zoo reopened on Tuesday.",
                ],
                "abstract": [
                    "Schools closed because of the storm.",
                    "Eight people died in crashes.",
                ],
            },
            {
                "id": "art-2",
                "article": [
                    "The satellite launched on Saturday morning.",
                    "It will measure sea levels for five years.",
                    "Crowds watched from the beach.",
                ],
                "abstract": ["The satellite launched Saturday to measure sea levels."],
            },
        ]
        path = tmp_path / "articles.jsonl"
        path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")
        return path

    def test_round_trip_counts_and_format(self, tmp_path):
        src = self._write_corpus(tmp_path)
        out = tmp_path / "pairs.jsonl"
        n_pos, n_neg = mine_pairs(src, out, threshold=0.2, seed=3)
        records = [json.loads(line) for line in out.read_text().splitlines()]
        assert len(records) == n_pos + n_neg
        assert n_pos >= 2
        assert n_neg == n_pos  # default 1:1 ratio
        for r in records:
            assert set(r) >= {"a", "b", "label", "source_id"}
            assert r["label"] in (0, 1)
            if r["label"] == 1:
                assert r["score"] >= 0.2
            else:
                assert "score" not in r

    def test_deterministic_per_seed(self, tmp_path):
        src = self._write_corpus(tmp_path)
        out1 = tmp_path / "p1.jsonl"
        out2 = tmp_path / "p2.jsonl"
        mine_pairs(src, out1, seed=9)
        mine_pairs(src, out2, seed=9)
        assert out1.read_text() == out2.read_text()

    def test_malformed_jsonl(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "x"}\n', encoding="utf-8")
        with pytest.raises(ParseError, match="article"):
            mine_pairs(path, tmp_path / "out.jsonl")

    def test_match_score_is_mean_of_three(self):
        a = tokenize("the cat sat on the mat")
        b = tokenize("the cat was on the mat")
        refs = [b]
        expected = (
            rouge_n(a, refs, n=1).f1 + rouge_n(a, refs, n=2).f1 + rouge_l(a, refs).f1
        ) / 3.0
        assert match_score(a, b) == pytest.approx(expected, rel=1e-12)
