import random

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from strongprops.constructs import corpus
from strongprops.scalars import ExactMatrix

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def certs():
    return {c.id: c for c in corpus()}


def random_symmetric(rng: random.Random, n: int, lo: int = -3, hi: int = 3, density: float = 0.5):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = rng.randint(lo, hi)
        for j in range(i + 1, n):
            if rng.random() < density:
                v = 0
                while v == 0:
                    v = rng.randint(lo, hi)
                rows[i][j] = rows[j][i] = v
    return ExactMatrix(rows)


def random_float_symmetric(rng: np.random.Generator, n: int, density: float = 0.6):
    A = np.zeros((n, n))
    for i in range(n):
        A[i, i] = rng.normal()
        for j in range(i + 1, n):
            if rng.random() < density:
                A[i, j] = A[j, i] = rng.uniform(0.5, 2.0) * rng.choice((-1, 1))
    return A
