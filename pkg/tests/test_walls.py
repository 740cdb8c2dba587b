import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mukai_lab.lattice import LatticeError
from mukai_lab.mukai import hilbert_preset, theta_dual
from mukai_lab.pointed import PointedSublattice
from mukai_lab.walls import (
    BRILL_NOETHER,
    FLOP_OTHER,
    FLOP_P_TYPE,
    HILBERT_CHOW,
    LGU,
    NO_WALL,
    Partition,
    classify_stratum,
    classify_wall,
    decompose_v,
    enumerate_partitions,
    is_effective,
    is_minimal,
    is_p_type,
    line_class,
    minimalize,
    reflect,
    refines,
)

from conftest import conjugate, new_coords, random_unimodular, template

QUARTIC = PointedSublattice.from_gram([[-2, 4], [4, -2]], (2, 1))  # basis (s, t)
S, T = (1, 0), (0, 1)


def d1_span(*vectors, positive=None):
    P = hilbert_preset(2, 1).period
    return PointedSublattice.from_period(P, vectors, positive=positive)


class TestClassifyWall:
    def test_flop_d1(self):
        H = d1_span((2, 1, 1))
        kind = classify_wall(H)
        assert kind.matched == {FLOP_P_TYPE}
        assert [w.condition for w in kind.witnesses if w.square == -2]

    def test_hilbert_chow_and_bn(self):
        kind = classify_wall(d1_span((0, 0, 1)))
        assert kind.matched == {BRILL_NOETHER, HILBERT_CHOW}
        hc = [w for w in kind.witnesses if w.condition.startswith("a^2 = 0")]
        assert all(w.square == 0 and abs(w.pairing) == 1 for w in hc)

    def test_quartic_is_bn_only(self):
        assert classify_wall(QUARTIC).matched == {BRILL_NOETHER}

    def test_lgu(self):
        # v = (1, 0), a = (0, 1) isotropic with (a, v) = 2
        H = PointedSublattice.from_gram([[2, 2], [2, 0]])
        assert LGU in classify_wall(H)

    def test_no_wall(self):
        H = PointedSublattice.from_gram([[2, 0], [0, -6]])
        assert classify_wall(H).matched == {NO_WALL}

    def test_flop_other(self):
        # w = (0, 1) is spherical with 0 < (w, v) = 1 < v^2/2
        kind = classify_wall(PointedSublattice.from_gram([[4, 1], [1, -2]]))
        assert kind.matched == {FLOP_OTHER}

    def test_requires_hyperbolic(self):
        with pytest.raises(LatticeError):
            classify_wall(PointedSublattice.from_gram([[2, 0], [0, 2]]))

    def test_witness_conditions_hold(self):
        H = d1_span((0, 0, 1))
        for w in classify_wall(H).witnesses:
            assert H.square(w.vector) == w.square
            assert H.pair(w.vector, H.v) == w.pairing


class TestPType:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_template(self, n):
        res = is_p_type(PointedSublattice.from_gram(template(n)))
        assert res and res.violating is None
        assert res.witness is not None

    def test_quartic_violation(self):
        res = is_p_type(QUARTIC)
        assert not res
        assert res.violating == S and QUARTIC.pair(S, QUARTIC.v) == 0

    def test_d11_small_form(self):
        assert is_p_type(PointedSublattice.from_gram([[6, 3], [3, -2]]))

    def test_no_half_class(self):
        assert not is_p_type(PointedSublattice.from_gram([[2, 0], [0, -6]]))


@settings(max_examples=120, deadline=None)
@given(n=st.integers(2, 12), seed=st.integers(0, 10**6))
def test_p_type_is_basis_independent(n, seed):
    rng = random.Random(seed)
    u = random_unimodular(rng, 2)
    H = PointedSublattice.from_gram(conjugate(template(n), u), new_coords(u, (1, 0)))
    res = is_p_type(H)
    assert res
    s, t = decompose_v(H)
    assert H.square(s) == H.square(t) == -2
    assert H.pair(s, H.v) == H.pair(t, H.v) == H.v_square // 2
    assert (s[0] + t[0], s[1] + t[1]) == H.v


hyperbolic_gram = st.tuples(st.integers(1, 6), st.integers(-6, 6), st.integers(-6, 3)).filter(
    lambda t: t[1] ** 2 - 4 * t[0] * t[2] > 0
).map(lambda t: [[2 * t[0], t[1]], [t[1], 2 * t[2]]])


class TestReflections:
    @settings(max_examples=150, deadline=None)
    @given(g=hyperbolic_gram, x=st.tuples(st.integers(-9, 9), st.integers(-9, 9)),
           y=st.tuples(st.integers(-9, 9), st.integers(-9, 9)))
    def test_isometric_involution(self, g, x, y):
        H = PointedSublattice.from_gram(g)
        sph = [w for w in product(range(-6, 7), repeat=2) if H.square(w) == -2]
        assume(sph)
        w = sph[0]
        rx, ry = reflect(H, w, x), reflect(H, w, y)
        assert H.pair(rx, ry) == H.pair(x, y)
        assert reflect(H, w, rx) == tuple(x)
        assert reflect(H, w, w) == (-w[0], -w[1])

    def test_rejects_non_spherical(self):
        with pytest.raises(LatticeError):
            reflect(QUARTIC, (1, 1), (1, 0))

    def test_effective_is_a_sign_choice(self):
        H = PointedSublattice.from_gram(template(3))
        for w in product(range(-4, 5), repeat=2):
            if H.square(w) == -2:
                assert is_effective(H, w) != is_effective(H, (-w[0], -w[1]))


class TestMinimalize:
    def test_already_minimal(self):
        H = PointedSublattice.from_gram(template(2))
        assert is_minimal(H)
        assert minimalize(H) == (H.v, [])

    def test_one_reflection(self):
        # v1 = s_{(0,1)}(v) for the template with n = 2, viewed from z = v
        H = PointedSublattice.from_gram(template(2))
        v1 = reflect(H, (0, 1), H.v)
        H1 = H.with_v(v1, positive=H.v)
        v0, refl = minimalize(H1)
        assert v0 == H.v or H.square(v0) == H.v_square
        assert refl and all(H.square(w) == -2 for w in refl)

    @settings(max_examples=100, deadline=None)
    @given(n=st.integers(2, 6), word=st.lists(st.sampled_from([(0, 1), (1, -1), (0, -1), (-1, 1)]), max_size=6))
    def test_reflections_reconstruct_v(self, n, word):
        H = PointedSublattice.from_gram(template(n))
        v = H.v
        for w in word:
            v = reflect(H, w, v)
        Hv = H.with_v(v, positive=H.v)
        v0, refl = minimalize(Hv)
        x = v0
        for w in refl:
            x = reflect(H, w, x)
        assert x == v
        assert is_minimal(H.with_v(v0, positive=H.v))
        assert H.square(v0) == H.v_square


class TestLineClass:
    def test_d1(self):
        H = d1_span((2, 1, 1))
        lc = line_class(H)
        pre = hilbert_preset(2, 1)
        assert lc.square == Fraction(-5, 2) and lc.primitive
        assert lc.ambient == theta_dual(pre.period, H.to_ambient(lc.s))

    def test_sign_follows_ample(self):
        H = d1_span((2, 1, 1))
        up = line_class(H, ample=(0, 1, 0))
        down = line_class(H, side=-1, ample=(0, 1, 0))
        assert up.R == tuple(-x for x in down.R)

    def test_orthogonal_ample(self):
        # R lies in v^perp, so v cannot pick its sign
        H = PointedSublattice.from_gram(template(2))
        with pytest.raises(LatticeError):
            line_class(H, ample=H.v)

    def test_not_p_type(self):
        with pytest.raises(LatticeError):
            line_class(QUARTIC)


class TestPartitions:
    def test_quartic(self):
        parts = enumerate_partitions(QUARTIC, (S, T))
        assert parts == [
            Partition.of([(2, 1)]),
            Partition.of([(1, 0), (1, 1)]),
            Partition.of([(1, 0), (1, 0), (0, 1)]),
        ]
        assert QUARTIC.square((1, 1)) == 4

    def test_refinement_order(self):
        v, mid, fine = enumerate_partitions(QUARTIC, (S, T))
        assert refines(mid, v) and refines(fine, v) and refines(fine, mid)
        assert not refines(v, mid) and not refines(mid, fine)
        for P in (v, mid, fine):
            assert refines(P, P)

    def test_outside_cone(self):
        with pytest.raises(LatticeError):
            enumerate_partitions(QUARTIC, ((0, 1), (-1, 0)))

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(2, 5))
    def test_parts_sum_and_bound(self, n):
        H = PointedSublattice.from_gram(template(n))
        s, t = decompose_v(H)
        for P in enumerate_partitions(H, (s, t)):
            assert P.total == H.v
            assert all(H.square(w) >= -2 for w in P.flat())


class TestStratum:
    def test_grassmannian(self):
        info = classify_stratum(QUARTIC, Partition.of([S, S, T]))
        assert info.kind == "Grassmannian" and info.grassmannian == (2, 4)
        assert info.dim_bound == 4 and info.ext1 == 4

    def test_plane(self):
        H = PointedSublattice.from_gram(template(3))
        s, t = decompose_v(H)
        info = classify_stratum(H, Partition.of([s, t]))
        assert info.kind == "Plane"
        # dim P^n with n = v^2/2 + 1
        assert info.dim_bound == H.n
        assert info.line_class.square == Fraction(-6, 2)

    def test_mixed(self):
        info = classify_stratum(QUARTIC, Partition.of([S, (1, 1)]))
        assert info.kind == "Mixed" and info.dim_bound is None

    def test_wrong_total(self):
        with pytest.raises(LatticeError):
            classify_stratum(QUARTIC, Partition.of([S]))
