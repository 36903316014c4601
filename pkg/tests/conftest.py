"""Shared fixtures: deterministic corpora for repeat and chain statistics.

The English-like corpus is generated by a seeded first-order letter
chain whose transition counts come from tests/data/sample_text.txt
(lightly smoothed so every transition is possible).  Everything here is
seeded, so expected values frozen in the tests are stable.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from pathlib import Path

import numpy as np
import pytest

from cipherbayes import corpus as corpus_mod
from cipherbayes.corpus import BigramStats, normalize, rgram_counts

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def sample_letters() -> str:
    return normalize(DATA_DIR.joinpath("sample_text.txt").read_text())


@pytest.fixture(scope="session")
def english_dist():
    return corpus_mod.ENGLISH_LETTERS


@pytest.fixture(scope="session")
def markov_generator(sample_letters):
    """Letter generator: returns make(n, seed) -> str of n chain letters."""
    counts = np.full((26, 26), 0.05)
    idx = [ord(c) - 65 for c in sample_letters]
    for a, b in zip(idx, idx[1:] + idx[:1]):
        counts[a][b] += 1
    cumrows = [list(np.cumsum(row / row.sum())) for row in counts]

    def make(n: int, seed: int) -> str:
        rng = random.Random(seed)
        out = []
        cur = rng.randrange(26)
        for _ in range(n):
            cur = bisect_left(cumrows[cur], rng.random())
            out.append(chr(65 + cur))
        return "".join(out)

    return make


@pytest.fixture(scope="session")
def markov_corpus(markov_generator) -> str:
    return markov_generator(100_000, seed=7)


@pytest.fixture(scope="session")
def markov_rgrams(markov_corpus):
    # deep enough that the repeat tail (11-grams for this seed) dies out
    return rgram_counts(markov_corpus, 14)


@pytest.fixture(scope="session")
def markov_bigrams(markov_corpus) -> BigramStats:
    return BigramStats.from_text(markov_corpus, circular=True)


@pytest.fixture(scope="session")
def uniform_corpus() -> str:
    rng = random.Random(11)
    return "".join(chr(65 + rng.randrange(26)) for _ in range(100_000))
