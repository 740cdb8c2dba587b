import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mukai_lab.lattice import IntLattice, LatticeError, det
from mukai_lab.monodromy import (
    factorize,
    orbit_count_bound,
    orbit_invariants,
    same_orbit,
    square_divisors,
)

from conftest import conjugate, new_coords, random_unimodular


@pytest.mark.parametrize("n, bound", [(2, 1), (5, 3), (13, 4)])
def test_orbit_bound(n, bound):
    assert orbit_count_bound(n) == bound


def test_orbit_bound_rejects_small_n():
    with pytest.raises(LatticeError):
        orbit_count_bound(1)


@settings(max_examples=300, deadline=None)
@given(m=st.integers(1, 10**6))
def test_factorize_round_trip(m):
    f = factorize(m)
    prod = 1
    for p, e in f.items():
        assert all(p % q for q in range(2, int(p**0.5) + 1))
        prod *= p**e
    assert prod == m


@settings(max_examples=200, deadline=None)
@given(m=st.integers(1, 5000))
def test_square_divisors_brute(m):
    assert square_divisors(m) == [k * k for k in range(1, m + 1) if k * k <= m and m % (k * k) == 0]


class TestInvariants:
    def test_d1_line(self):
        inv = orbit_invariants(IntLattice(((2, 0), (0, -2))), (2, -3))
        assert inv.square == -10 and inv.div == 2 and inv.order == 2
        # a / 2 = (1, -3/2), square -5/2
        assert inv.q_value % 2 == Fraction(-5, 2) % 2

    def test_non_primitive(self):
        with pytest.raises(LatticeError):
            orbit_invariants(IntLattice(((2, 0), (0, -2))), (2, 2))

    def test_same_orbit_sign(self):
        L = IntLattice(((2, 0), (0, -2)))
        cmp = same_orbit(L, (2, -3), (2, 3))
        assert cmp.negated
        assert "Eichler" in cmp.note


def random_even_lattice(rng, n):
    while True:
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            g[i][i] = 2 * rng.randint(-4, 4)
            for j in range(i + 1, n):
                g[i][j] = g[j][i] = rng.randint(-3, 3)
        if det(g) != 0:
            return g


def random_primitive(rng, n):
    from math import gcd

    while True:
        a = [rng.randint(-6, 6) for _ in range(n)]
        g = 0
        for x in a:
            g = gcd(g, x)
        if g == 1:
            return tuple(a)


def test_invariants_under_basis_change():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 6)
        g = random_even_lattice(rng, n)
        a = random_primitive(rng, n)
        u = random_unimodular(rng, n)
        L, L2 = IntLattice(tuple(map(tuple, g))), IntLattice(tuple(map(tuple, conjugate(g, u))))
        i1, i2 = orbit_invariants(L, a), orbit_invariants(L2, new_coords(u, a))
        assert (i1.square, i1.div, i1.order) == (i2.square, i2.div, i2.order)
        assert i1.q_value % 2 == i2.q_value % 2
