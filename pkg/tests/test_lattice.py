from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mukai_lab.lattice import (
    IntLattice,
    LatticeError,
    coords_in_basis,
    det,
    is_independent,
    discriminant_group,
    divisibility,
    is_saturated,
    matmul,
    orthogonal_complement,
    pair,
    saturate,
    smith_normal_form,
)
from mukai_lab.mukai import AlgMukaiLattice, K3Picard

D1 = IntLattice(((2, 0), (0, -2)))
D11 = IntLattice(((22, 0), (0, -2)))


class TestPair:
    def test_diagonal(self):
        assert pair(D1, (1, 0), (1, 0)) == 2

    def test_line_class_square_d1(self):
        R = (Fraction(1), Fraction(-3, 2))
        assert pair(D1, R, R) == Fraction(-5, 2)

    def test_second_line_class_d11(self):
        R = ("11", "-73/2")
        assert pair(D11, R, R) == Fraction(-5, 2)

    def test_dimension_mismatch(self):
        with pytest.raises(LatticeError):
            pair(D1, (1, 0, 0), (1, 0))


class TestDiscriminantGroup:
    @pytest.mark.parametrize(
        "gram, factors",
        [(((2, 0), (0, -2)), (2, 2)), (((1,),), ()), (((2, 1), (1, -2)), (5,))],
    )
    def test_invariant_factors(self, gram, factors):
        assert discriminant_group(IntLattice(gram)).invariant_factors == factors

    def test_degenerate_rejected(self):
        with pytest.raises(LatticeError):
            IntLattice(((1, 1), (1, 1)))

    def test_degenerate_flag(self):
        L = IntLattice(((1, 1), (1, 1)), allow_degenerate=True)
        with pytest.raises(LatticeError):
            discriminant_group(L)


class TestDivisibility:
    def test_line_double(self):
        res = divisibility(D1, (2, -3))
        assert res.div == 2 and res.primitive
        assert res.dual_class.order == 2

    def test_delta(self):
        res = divisibility(D1, (0, 1))
        assert res.div == 2 and res.primitive

    def test_rank_one(self):
        res = divisibility(IntLattice(((1,),)), (5,))
        assert res.div == 5 and not res.primitive
        assert res.dual_class.is_zero

    def test_zero_vector(self):
        with pytest.raises(LatticeError):
            divisibility(D1, (0, 0))


class TestSaturation:
    def test_divides_content(self):
        L = IntLattice(((2, 1, 0), (1, 2, 0), (0, 0, -2)))
        assert saturate(L, [(2, 0, 0), (0, 1, 0)]) == [(1, 0, 0), (0, 1, 0)]

    def test_already_saturated(self):
        mukai = AlgMukaiLattice(K3Picard.rank_one(1)).lattice
        span = [(1, 0, -1), (2, 1, 1)]
        assert saturate(mukai, span) == span

    def test_index_two(self):
        basis = saturate(D1, [(1, 1), (1, -1)])
        assert abs(det([list(b) for b in basis])) == 1

    def test_dependent(self):
        with pytest.raises(LatticeError):
            saturate(D1, [(1, 1), (2, 2)])


class TestOrthogonalComplement:
    def test_mukai_v_perp(self):
        mukai = AlgMukaiLattice(K3Picard.rank_one(1)).lattice
        comp = orthogonal_complement(mukai, [(1, 0, -1)])
        assert len(comp) == 2 and is_saturated(comp)
        for x in comp:
            assert mukai.pair(x, (1, 0, -1)) == 0
        for y in ((0, 1, 0), (1, 0, 1)):
            assert all(c.denominator == 1 for c in coords_in_basis(comp, y))

    def test_diagonal(self):
        assert orthogonal_complement(D1, [(1, 0)]) == [(0, 1)]

    def test_full_basis(self):
        assert orthogonal_complement(D1, [(1, 0), (0, 1)]) == []


# -- properties -----------------------------------------------------------------

ints = st.integers(-10, 10)
rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def sym_gram(draw, max_rank=6, nondegenerate=True):
    n = draw(st.integers(1, max_rank))
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            g[i][j] = g[j][i] = draw(ints)
    if nondegenerate and det(g) == 0:
        g = [[g[i][j] + (11 if i == j else 0) * (i + 1) for j in range(n)] for i in range(n)]
    return g


@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_pair_symmetric_bilinear(data):
    g = data.draw(sym_gram(max_rank=4, nondegenerate=False))
    n = len(g)
    L = IntLattice(tuple(map(tuple, g)), allow_degenerate=True)
    a, b, c = (data.draw(st.lists(rats, min_size=n, max_size=n)) for _ in range(3))
    s = data.draw(rats)
    assert pair(L, a, b) == pair(L, b, a)
    ab = [x + s * y for x, y in zip(a, b)]
    assert pair(L, ab, c) == pair(L, a, c) + s * pair(L, b, c)


@settings(max_examples=300, deadline=None)
@given(g=sym_gram())
def test_disc_order_is_abs_det(g):
    if det(g) == 0:
        return
    D = discriminant_group(IntLattice(tuple(map(tuple, g))))
    assert D.order == abs(det(g))
    for a, b in zip(D.invariant_factors, D.invariant_factors[1:]):
        assert b % a == 0
    assert all(f > 1 for f in D.invariant_factors)


@settings(max_examples=300, deadline=None)
@given(rows=st.lists(st.lists(st.integers(-30, 30), min_size=4, max_size=4), min_size=1, max_size=4))
def test_smith_normal_form(rows):
    d, u, v = smith_normal_form(rows)
    assert matmul(matmul(u, rows), v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [d[i][i] for i in range(min(len(rows), 4))]
    nz = [x for x in diag if x]
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0


@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_saturation_idempotent_and_complement(data):
    g = data.draw(sym_gram(max_rank=5))
    n = len(g)
    if det(g) == 0 or n < 2:
        return
    L = IntLattice(tuple(map(tuple, g)))
    k = data.draw(st.integers(1, n - 1))
    span = [data.draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n)) for _ in range(k)]
    if not is_independent(span):
        return
    sat = saturate(L, span)
    assert is_saturated(sat)
    assert saturate(L, sat) == sat
    comp = orthogonal_complement(L, sat)
    back = orthogonal_complement(L, comp)
    assert len(back) == len(sat)
    # equal saturated lattices: each basis expresses the other integrally
    for x in sat:
        assert all(c.denominator == 1 for c in coords_in_basis(back, x))
    for x in back:
        assert all(c.denominator == 1 for c in coords_in_basis(sat, x))


@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_divisibility_matches_direct_gcd(data):
    g = data.draw(sym_gram(max_rank=5))
    if det(g) == 0:
        return
    n = len(g)
    L = IntLattice(tuple(map(tuple, g)))
    a = data.draw(st.lists(st.integers(-9, 9), min_size=n, max_size=n))
    if not any(a):
        return
    res = divisibility(L, a)
    direct = 0
    for i in range(n):
        direct = gcd(direct, sum(g[i][j] * a[j] for j in range(n)))
    assert res.div == direct
    content = 0
    for x in a:
        content = gcd(content, x)
    assert (abs(det(g)) * content) % res.div == 0
    assert res.primitive == (content == 1)
