import sys
from pathlib import Path

import numpy as np
import pytest

from mdspline import SplineSpace

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent.parent / "fixtures"

MODEL_POINTS = [
    [0.0, 0.0], [2.0, 2.2], [4.4, 2.6], [6.2, 1.2],
    [5.4, -1.4], [2.6, -1.8], [0.0, 0.0],
]

GC_POINTS = [
    [0.0, 0.0], [0.4, 1.1], [1.1, 1.9], [2.0, 2.1],
    [2.9, 1.9], [3.6, 1.1], [4.0, 0.0], [4.5, -0.8],
]


@pytest.fixture
def running_space():
    return SplineSpace((0, 7), [1, 3, 6], [1, 2, 4, 2], [0, 1, 2])


@pytest.fixture
def mixed_space():
    return SplineSpace((0, 5), [1, 2, 3, 4], [2, 3, 4, 3, 2], [2, 3, 3, 2])


@pytest.fixture
def gc_space_parametric():
    return SplineSpace((0, 3), [0.75, 1.75, 2.5], [3, 4, 3, 1], [2, 2, 0])


def gc_connections(alpha, beta, gamma):
    m1 = [[1, 0, 0], [0, alpha, 0], [0, beta, gamma]]
    m2 = [[1, 0, 0], [0, 1 / alpha, 0], [0, beta / (alpha * gamma), 1 / gamma]]
    return [m1, m2, [[1]]]


def random_space(rng, q_max=4, d_max=6) -> SplineSpace:
    q = int(rng.integers(0, q_max + 1))
    interior = np.sort(rng.choice(np.arange(1.0, 10.0), size=q, replace=False))
    degrees = rng.integers(1, d_max + 1, size=q + 1)
    ks = []
    for i in range(q):
        if degrees[i] == degrees[i + 1]:
            kmax = int(degrees[i]) - 1
        else:
            kmax = int(min(degrees[i], degrees[i + 1]))
        ks.append(int(rng.integers(0, kmax + 1)))
    return SplineSpace((0.0, 10.0), interior, degrees, ks)


def space_corpus(count, seed=2026, **kwargs):
    rng = np.random.default_rng(seed)
    return [random_space(rng, **kwargs) for _ in range(count)]
