import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from dppsum.corpus import load_clusters
from dppsum.errors import ValidationError
from dppsum.estimator import DppSummarizer
from dppsum.similarity import read_similarity_file


@pytest.fixture(scope="module")
def clusters(mini_corpus_dir):
    return load_clusters(mini_corpus_dir)


@pytest.fixture(scope="module")
def fitted(clusters):
    return DppSummarizer(epochs=30, seed=0).fit(clusters)


class TestSklearnProtocol:
    def test_get_params_round_trip(self):
        est = DppSummarizer(budget_words=80, lambda_c=0.1)
        params = est.get_params()
        assert params["budget_words"] == 80
        assert params["lambda_c"] == 0.1
        est.set_params(budget_words=50)
        assert est.budget_words == 50

    def test_clone(self, fitted):
        cloned = clone(fitted)
        assert cloned.get_params() == fitted.get_params()
        assert not hasattr(cloned, "model_")

    def test_not_fitted_error(self, clusters):
        with pytest.raises(NotFittedError):
            DppSummarizer().predict(clusters)


class TestFitPredict:
    def test_fit_records_history_and_model(self, fitted):
        assert hasattr(fitted, "model_")
        assert len(fitted.history_) == 31
        assert all(b >= a for a, b in zip(fitted.history_, fitted.history_[1:]))

    def test_predict_respects_budget(self, fitted, clusters):
        for selection, cluster in zip(fitted.predict(clusters), clusters):
            assert selection.word_count <= 100
            assert len(set(selection.indices)) == len(selection.indices)
            assert all(0 <= i < cluster.n for i in selection.indices)

    def test_summarize_returns_selected_raw_text(self, fitted, clusters):
        text = fitted.summarize(clusters[0])
        selection = fitted.select(clusters[0])
        assert text.splitlines() == [
            clusters[0].sentences[i].raw for i in selection.indices
        ]

    def test_deterministic_predictions(self, clusters):
        a = DppSummarizer(epochs=10, seed=1).fit(clusters).predict(clusters)
        b = DppSummarizer(epochs=10, seed=1).fit(clusters).predict(clusters)
        assert a == b

    def test_fit_requires_clusters(self):
        with pytest.raises(ValidationError):
            DppSummarizer().fit([])


class TestCombinedMode:
    def test_lambda_zero_matches_cosine(self, clusters, fixtures_dir):
        storm = [c for c in clusters if c.topic_id == "t-storm"]
        caps, _ = read_similarity_file(fixtures_dir / "t-storm_caps.sim")
        cosine = DppSummarizer(epochs=20, seed=0).fit(storm)
        combined = DppSummarizer(
            epochs=20,
            seed=0,
            similarity_mode="combined",
            lambda_c=0.0,
            caps_provider=lambda topic: caps,
        ).fit(storm)
        assert cosine.predict(storm) == combined.predict(storm)

    def test_combined_changes_selection_inputs(self, clusters, fixtures_dir):
        storm = [c for c in clusters if c.topic_id == "t-storm"]
        caps, _ = read_similarity_file(fixtures_dir / "t-storm_caps.sim")
        est = DppSummarizer(
            similarity_mode="combined",
            lambda_c=0.2,
            caps_provider=lambda topic: caps,
            epochs=20,
        ).fit(storm)
        sel = est.predict(storm)[0]
        assert sel.word_count <= 100

    def test_combined_requires_provider(self, clusters):
        with pytest.raises(ValidationError, match="caps_provider"):
            DppSummarizer(similarity_mode="combined").fit(clusters)

    def test_caps_size_mismatch(self, clusters):
        storm = [c for c in clusters if c.topic_id == "t-storm"]
        est = DppSummarizer(
            similarity_mode="combined",
            caps_provider=lambda topic: np.eye(3),
            epochs=5,
        ).fit(storm)
        with pytest.raises(ValidationError, match="size"):
            est.predict(storm)


class TestParamValidation:
    def test_bad_budget(self, clusters):
        with pytest.raises(ValidationError, match="budget_words"):
            DppSummarizer(budget_words=0).fit(clusters)

    def test_bad_lambda(self, clusters):
        with pytest.raises(ValidationError, match="lambda_c"):
            DppSummarizer(lambda_c=1.4).fit(clusters)

    def test_bad_mode(self, clusters):
        with pytest.raises(ValidationError, match="similarity_mode"):
            DppSummarizer(similarity_mode="magic").fit(clusters)
