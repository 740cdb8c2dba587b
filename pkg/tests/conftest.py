import random
import sys
from fractions import Fraction

import pytest

from mukai_lab.lattice import matmul, transpose, unimodular_inverse


def random_unimodular(rng: random.Random, n: int, steps: int = 6, spread: int = 3) -> list[list[int]]:
    """Product of random elementary matrices and sign flips."""
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if n > 1:
            k = rng.randint(-spread, spread)
            for r in range(n):
                u[r][j] += k * u[r][i]
        if rng.random() < 0.3:
            c = rng.randrange(n)
            for r in range(n):
                u[r][c] = -u[r][c]
        if n > 1 and rng.random() < 0.3:
            a, b = rng.sample(range(n), 2)
            for r in range(n):
                u[r][a], u[r][b] = u[r][b], u[r][a]
    return u


def conjugate(gram, u):
    """Gram matrix in the basis given by the columns of u."""
    return [[int(x) for x in row] for row in matmul(matmul(transpose(u), gram), u)]


def new_coords(u, x):
    """Coordinates of x (old basis) in the basis given by the columns of u."""
    inv = unimodular_inverse(u)
    return tuple(int(sum(Fraction(inv[i][j]) * x[j] for j in range(len(x)))) for i in range(len(x)))


def template(n: int):
    return [[2 * n - 2, n - 1], [n - 1, -2]]


@pytest.fixture
def rng():
    return random.Random(20261018)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
