from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mukai_lab.lattice import LatticeError
from mukai_lab.pointed import PointedSublattice, classes_on_line
from mukai_lab.quadform import (
    BinaryForm,
    finiteness_bounds,
    hilb_pell_equation,
    pell_fundamental,
    represent_bounded,
    represent_pell,
    spherical_with_pairing,
)
from mukai_lab.surd import Surd, squarefree_part


class TestBounded:
    def test_template_form(self):
        f = BinaryForm.from_gram([[2, 1], [1, -2]])
        sols = represent_bounded(f, -2, 3)
        assert {(0, 1), (0, -1), (1, -1), (-1, 1)} <= set(sols)
        assert all(f(x, y) == -2 for x, y in sols)
        scan = sorted((x, y) for x in range(-3, 4) for y in range(-3, 4) if f(x, y) == -2)
        assert sols == scan

    def test_isotropic_diagonal(self):
        f = BinaryForm.from_gram([[2, 0], [0, -2]])
        assert represent_bounded(f, 0, 2) == sorted(
            [(0, 0), (1, 1), (1, -1), (-1, 1), (-1, -1), (2, 2), (2, -2), (-2, 2), (-2, -2)]
        )

    def test_quartic_unit_box(self):
        f = BinaryForm.from_gram([[-2, 4], [4, -2]])
        assert represent_bounded(f, -2, 1) == [(-1, 0), (0, -1), (0, 1), (1, 0)]


class TestPell:
    @pytest.mark.parametrize("D, sol", [(2, (3, 2)), (11, (10, 3)), (13, (649, 180)), (61, (1766319049, 226153980))])
    def test_fundamental(self, D, sol):
        assert pell_fundamental(D) == sol

    def test_hilb_d1_spherical(self):
        form, rhs, A, B, s_of = hilb_pell_equation(2, 1, 1, -2)
        sols = represent_pell(form, rhs).in_box(50)
        vecs = {((X - B) // (2 * A), c, int(s_of((X - B) // (2 * A)))) for X, c in sols if (X - B) % (2 * A) == 0}
        assert (2, 1, 1) in vecs

    def test_hilb_d11_spherical(self):
        form, rhs, A, B, s_of = hilb_pell_equation(2, 11, 1, -2)
        sols = represent_pell(form, rhs).in_box(100)
        rs = {((X - B) // (2 * A), c) for X, c in sols if (X - B) % (2 * A) == 0}
        assert (4, 1) in rs
        assert s_of(4) == 3

    def test_hilb_d1_isotropic_pairing_two(self):
        form, rhs, A, B, s_of = hilb_pell_equation(2, 1, 2, 0)
        sols = represent_pell(form, rhs).in_box(200)
        found = []
        for X, c in sols:
            if (X - B) % (2 * A) == 0:
                r = (X - B) // (2 * A)
                found.append((r, c, int(s_of(r))))
        assert found and all(c == 0 for _, c, _ in found)
        from math import gcd

        assert all(gcd(*a) > 1 for a in found)

    def test_constraint_returns_finite_list(self):
        f = BinaryForm.from_gram([[2, 1], [1, -2]])
        # (w, v) = 2x + y for v = (1, 0)
        assert represent_pell(f, -2, constraint=(2, 1, 1)) == [(0, 1), (1, -1)]

    def test_definite_rejected(self):
        with pytest.raises(LatticeError):
            represent_pell(BinaryForm(1, 0, 1), 1)


indefinite_form = st.tuples(*[st.integers(-12, 12)] * 3).filter(lambda t: t[1] ** 2 - t[0] * t[2] > 0).map(
    lambda t: BinaryForm(*t)
)


@settings(max_examples=60, deadline=None)
@given(f=indefinite_form, m=st.sampled_from([-2, 0, 1, -1, 5, 12]), bound=st.integers(1, 80))
def test_pell_matches_scan(f, m, bound):
    assert represent_pell(f, m).in_box(bound) == represent_bounded(f, m, bound)


class TestSpherical:
    def test_template(self):
        H = PointedSublattice.from_gram([[2, 1], [1, -2]])
        sols = spherical_with_pairing(H, 1)
        assert sols == sorted([(0, 1), (0, -1), (1, -1), (-1, 1)])
        assert not [w for w in sols if H.pair(w, H.v) == 0]

    def test_quartic(self):
        H = PointedSublattice.from_gram([[-2, 4], [4, -2]], (2, 1))
        assert spherical_with_pairing(H, 2) == [(-1, 0), (1, 0)]

    def test_diagonal(self):
        H = PointedSublattice.from_gram([[2, 0], [0, -2]])
        assert spherical_with_pairing(H, 0) == [(0, -1), (0, 1)]

    def test_not_hyperbolic(self):
        with pytest.raises(LatticeError):
            spherical_with_pairing(PointedSublattice.from_gram([[2, 0], [0, 2]]), 1)


pointed_hyperbolic = st.tuples(st.integers(1, 12), st.integers(-8, 8), st.integers(-12, 4)).filter(
    lambda t: t[1] ** 2 - 4 * t[0] * t[2] > 0
).map(lambda t: PointedSublattice.from_gram([[2 * t[0], t[1]], [t[1], 2 * t[2]]]))


@settings(max_examples=150, deadline=None)
@given(H=pointed_hyperbolic, target=st.integers(0, 8))
def test_spherical_closed_and_bounded(H, target):
    sols = spherical_with_pairing(H, target)
    assert sorted((-x, -y) for x, y in sols) == sols
    A, B = finiteness_bounds(H, target)
    w0 = H.v_perp_generator()
    # w = alpha v + beta w0 with alpha = (w, v)/v^2 and beta from the w0 component
    vv, ww = H.v_square, H.square(w0)
    for w in sols:
        alpha = H.pair(w, H.v) / vv
        beta = H.pair(w, w0) / ww
        assert abs(alpha) <= A and beta * beta <= B
    # the scan covers the whole box: compare with an exhaustive search
    R = 4 * (isqrt(int(B)) + 2) * (abs(H.v[0]) + abs(H.v[1]) + abs(w0[0]) + abs(w0[1]) + 1)
    R = min(R, 120)
    f = BinaryForm.from_gram(H.gram)
    brute = [w for w in represent_bounded(f, -2, R) if abs(H.pair(w, H.v)) <= target]
    assert set(brute) <= set(sols)


def test_classes_on_line_rational_functional():
    H = PointedSublattice.from_gram([[2, 1], [1, -2]])
    a = classes_on_line(H, (Fraction(1, 2), 0), Fraction(1, 2), -2, -2)
    b = classes_on_line(H, (1, 0), 1, -2, -2)
    assert a == b


class TestSurd:
    def test_canonical(self):
        s = Surd(2, 2, 4, 8)  # (2 + 2 sqrt 8)/4 = (1 + 2 sqrt 2)/2
        assert (s.p, s.q, s.r, s.D) == (1, 2, 2, 2)

    def test_rational_collapse(self):
        assert Surd.sqrt(9) == 3 and Surd.sqrt(9).is_rational

    def test_sign_and_order(self):
        r = Surd.sqrt(11)
        assert Fraction(33, 10) < r < Fraction(332, 100)
        assert (r - Fraction(33, 10)).sign() == 1
        assert (Fraction(33, 10) - r).sign() == -1

    def test_arithmetic(self):
        a = Surd(1, 1, 1, 2)
        b = Surd(1, -1, 1, 2)
        assert a * b == -1
        assert a + b == 2

    def test_mixed_radicands(self):
        with pytest.raises(ValueError):
            Surd.sqrt(2) + Surd.sqrt(3)

    @settings(max_examples=200, deadline=None)
    @given(p=st.integers(-50, 50), q=st.integers(-50, 50), r=st.integers(1, 20), D=st.integers(0, 200))
    def test_sign_matches_float(self, p, q, r, D):
        s = Surd(p, q, r, D)
        val = (p + q * D ** 0.5) / r
        if abs(val) > 1e-9:
            assert s.sign() == (1 if val > 0 else -1)

    @pytest.mark.parametrize("n, k, m", [(12, 2, 3), (8, 2, 2), (1, 1, 1), (50, 5, 2)])
    def test_squarefree(self, n, k, m):
        assert squarefree_part(n) == (k, m)
