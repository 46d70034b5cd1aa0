from pathlib import Path

import numpy as np
import pytest

from dppsum.corpus import Cluster, Document, Sentence, tokenize

REPO_ROOT = Path(__file__).resolve().parent.parent
MINI_CORPUS = REPO_ROOT / "data" / "mini_corpus"
FIXTURES = REPO_ROOT / "data" / "fixtures"


@pytest.fixture(scope="session")
def mini_corpus_dir() -> Path:
    return MINI_CORPUS


@pytest.fixture(scope="session")
def trained_model_path(tmp_path_factory) -> Path:
    """Model trained on the bundled mini-corpus, shared across tests."""
    from dppsum.cli import main

    path = tmp_path_factory.mktemp("model") / "model.json"
    rc = main(
        [
            "train",
            "--clusters-dir", str(MINI_CORPUS),
            "--epochs", "30",
            "--out", str(path),
        ]
    )
    assert rc == 0
    return path


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def make_cluster(
    docs: list[list[str]],
    references: list[list[str]] | None = None,
    topic_id: str = "test-topic",
) -> Cluster:
    """Build a cluster from raw sentence strings, mirroring load_cluster."""
    documents = []
    sentences = []
    next_id = 0
    for d_idx, doc_sents in enumerate(docs):
        kept = []
        for raw in doc_sents:
            tokens = tuple(tokenize(raw))
            if not tokens:
                continue
            kept.append(
                Sentence(
                    id=next_id,
                    doc_id=f"doc-{d_idx}",
                    position=len(kept),
                    tokens=tokens,
                    raw=raw,
                )
            )
            next_id += 1
        documents.append(Document(doc_id=f"doc-{d_idx}", sentences=tuple(kept)))
        sentences.extend(kept)
    refs = tuple(
        tuple(t for sent in ref for t in tokenize(sent)) for ref in (references or [])
    )
    return Cluster(
        topic_id=topic_id,
        documents=tuple(documents),
        sentences=tuple(sentences),
        references=refs,
    )


def random_similarity(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random PSD similarity matrix: Gram matrix of nonnegative unit vectors."""
    v = rng.uniform(0.0, 1.0, size=(n, max(2 * n, 4)))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    s = v @ v.T
    s = (s + s.T) / 2.0
    np.fill_diagonal(s, 1.0)
    return np.clip(s, 0.0, 1.0)


def word_sentences(lengths: list[int]) -> list[Sentence]:
    """Synthetic sentences with given token counts (distinct tokens)."""
    return [
        Sentence(
            id=i,
            doc_id="doc-0",
            position=i,
            tokens=tuple(f"w{i}_{j}" for j in range(k)),
            raw=" ".join(f"w{i}_{j}" for j in range(k)),
        )
        for i, k in enumerate(lengths)
    ]
