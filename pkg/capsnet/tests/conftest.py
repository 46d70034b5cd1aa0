import random
from pathlib import Path

import pytest

from capsnet import PairRecord, TINY_CONFIG, Vocabulary

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
MINI_CORPUS = REPO_ROOT / "data" / "mini_corpus"
FIXTURES = REPO_ROOT / "data" / "fixtures"


@pytest.fixture(scope="session")
def tiny_vocab() -> Vocabulary:
    return Vocabulary([f"w{i}" for i in range(60)])


def synthetic_pairs(n_pos: int, n_neg: int, seed: int = 0) -> list[PairRecord]:
    """Positives are noisy copies; negatives share no content words."""
    rng = random.Random(seed)
    words = [f"w{i}" for i in range(60)]
    records = []
    for _ in range(n_pos):
        base = rng.sample(words[:30], rng.randint(5, 10))
        noisy = [t for t in base if rng.random() > 0.2] or base[:3]
        records.append(PairRecord(a=tuple(base), b=tuple(noisy), label=1))
    for _ in range(n_neg):
        a = rng.sample(words[:30], rng.randint(5, 10))
        b = rng.sample(words[30:], rng.randint(5, 10))
        records.append(PairRecord(a=tuple(a), b=tuple(b), label=0))
    rng.shuffle(records)
    return records


@pytest.fixture(scope="session")
def tiny_config():
    return TINY_CONFIG
