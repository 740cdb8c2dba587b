"""Numeric Lagrangian-plane criteria, line-class certificates, box scans for
Mori cone generators and fibration-section sublattices."""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .lattice import IntLattice, LatticeError, as_qvec, discriminant_group
from .mukai import CurveClass, PointedPeriod, theta_dual
from .pointed import PointedSublattice
from .walls import PTypeResult, is_p_type

DEFAULT_MAX_CELLS = 10**6


def max_box_cells() -> int:
    raw = os.environ.get("MUKAI_LAB_MAX_BOX")
    return int(raw) if raw else DEFAULT_MAX_CELLS


def plane_square(n: int) -> Fraction:
    """-(n + 3)/2, the square of the line class of a Lagrangian plane."""
    return Fraction(-(n + 3), 2)


def disc_order(L: IntLattice, R: Sequence) -> int | None:
    """Order of R in L^v/L, or None when R is not in L^v."""
    R = as_qvec(R)
    if any(x.denominator != 1 for x in L.dual_pairing(R)):
        return None
    return discriminant_group(L).element(R).order


@dataclass(frozen=True)
class Verdict:
    passed: bool
    reasons: tuple[str, ...]
    square: Fraction
    double_integral: bool
    disc_order: int | None = None

    def __bool__(self) -> bool:
        return self.passed


def numeric_criteria(n: int, L: IntLattice, R: Sequence) -> Verdict:
    """(R, R) = -(n+3)/2 and 2R integral."""
    if n < 2:
        raise LatticeError("n must be at least 2")
    R = as_qvec(R)
    if len(R) != L.rank:
        raise LatticeError("R has the wrong number of coordinates")
    sq = L.square(R)
    target = plane_square(n)
    integral = all((2 * x).denominator == 1 for x in R)
    reasons = []
    if sq != target:
        reasons.append(f"(R,R) = {sq} != {target}")
    if not integral:
        reasons.append("2R is not integral")
    return Verdict(not reasons, tuple(reasons), sq, integral, disc_order(L, R))


@dataclass(frozen=True)
class PlaneCertificate:
    H: PointedSublattice
    s: tuple[int, ...]
    sign: int  # theta^v(s) = sign * R
    p_type: PTypeResult


def plane_line_certificate(P: PointedPeriod, R) -> PlaneCertificate | None:
    """Find integral s with s^2 = -2, |(s, v)| = v^2/2 and theta^v(s) = +-R.

    Writing s = R' + c v with R' in v^perp, (s, v) = c v^2 = +-v^2/2 forces
    c = +-1/2, so s = +-R + v/2 up to the global sign of s; only these two
    lifts need checking.
    """
    R = as_qvec(R.coords if isinstance(R, CurveClass) else R)
    if P.pair(R, P.v) != 0:
        raise LatticeError("R is not orthogonal to v")
    half = Fraction(1, 2)
    for sign in (1, -1):
        s = tuple(sign * r + half * x for r, x in zip(R, P.v))
        if any(x.denominator != 1 for x in s):
            continue
        s = tuple(int(x) for x in s)
        if P.lattice.square(s) != -2:
            continue
        H = PointedSublattice.from_period(P, [s])
        assert theta_dual(P, s).coords == tuple(sign * r for r in R)
        return PlaneCertificate(H, s, sign, is_p_type(H))
    return None


# -- Mori cone generators ------------------------------------------------------

@dataclass(frozen=True)
class MoriGenerator:
    a: tuple[int, ...]
    curve: CurveClass
    curve_square: Fraction
    tags: tuple[str, ...]


@dataclass(frozen=True)
class MoriScan:
    """Result of a box scan; ``generators`` materialises the curve classes."""

    period: PointedPeriod
    vectors: tuple[tuple[int, ...], ...]
    pairings: tuple[int, ...]
    squares: tuple[int, ...]
    box: int
    requested_box: int
    truncated: bool
    cells: int

    def __len__(self) -> int:
        return len(self.vectors)

    def curve_squares(self) -> list[Fraction]:
        vs = self.period.v_square
        return [sq - Fraction(k * k, vs) for sq, k in zip(self.squares, self.pairings)]

    @cached_property
    def generators(self) -> tuple[MoriGenerator, ...]:
        vs = self.period.v_square
        out = []
        for a, k, sq in zip(self.vectors, self.pairings, self.squares):
            curve = theta_dual(self.period, a)
            tags = ["spherical" if sq == -2 else "isotropic" if sq == 0 else "positive"]
            if 2 * abs(k) == vs:
                tags.append("half")
            out.append(MoriGenerator(a, curve, curve.square, tuple(tags)))
        return tuple(out)


def _integral_functional(L: IntLattice, x: Sequence) -> list[int]:
    vals = [L.pair(x, [int(i == j) for j in range(L.rank)]) for i in range(L.rank)]
    den = 1
    for t in vals:
        den = den * t.denominator // gcd(den, t.denominator)
    return [int(t * den) for t in vals]


def _evaluate(coeffs: Sequence[int], full, cells: int, dtype):
    acc = np.zeros(cells, dtype=dtype)
    for c, col in zip(coeffs, full):
        if c:
            acc = acc + c * col
    return acc


def _direction_key(vs: int, k: int, a: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    # v^2 theta^v(a) = v^2 a - k v, reduced to a primitive integer vector
    w = [vs * x - k * y for x, y in zip(a, v)]
    g = 0
    for x in w:
        g = gcd(g, x)
    return tuple(x // g for x in w) if g else tuple(w)


def mori_extremal_generators(P: PointedPeriod, ample: Sequence, box: int, tiebreak: Sequence | None = None) -> MoriScan:
    """All a with |a_i| <= box, a^2 >= -2, |(a, v)| <= v^2/2 and
    (ample, theta^v(a)) > 0, de-duplicated by the ray of theta^v(a).

    With ``tiebreak``, classes orthogonal to ``ample`` are kept when they pair
    positively with ``tiebreak``: this realises a nef boundary class such as h
    perturbed infinitesimally into the ample cone.

    The coordinate with the smallest nonzero coefficient in (., v) is solved
    from (a, v) = k, so the scan costs (2 box + 1)^(rank - 1) cells per k.
    """
    L = P.lattice
    ample = as_qvec(ample)
    if L.square(ample) <= 0:
        raise LatticeError("the ample class must have positive square")
    if P.pair(ample, P.v) != 0:
        raise LatticeError("the ample class must lie in v^perp")
    rank = L.rank
    vs = P.v_square
    half = vs // 2
    requested = box
    cap = max_box_cells()
    truncated = False
    while box > 0 and (2 * box + 1) ** (rank - 1) > cap:
        box -= 1
        truncated = True
    G = [[int(x) for x in row] for row in L.gram]
    coeff = [int(x) for x in L.dual_pairing(P.v)]  # (e_i, v)
    pivot = min((i for i in range(rank) if coeff[i]), key=lambda i: (abs(coeff[i]), i))
    free = [i for i in range(rank) if i != pivot]
    # (ample, theta(a)) = (ample, a) since ample is in v^perp
    amp = _integral_functional(L, ample)
    tb = None
    if tiebreak is not None:
        tiebreak = as_qvec(tiebreak)
        if P.pair(tiebreak, P.v) != 0:
            raise LatticeError("the tie-break class must lie in v^perp")
        tb = _integral_functional(L, tiebreak)

    bound = max(abs(x) for row in G for x in row) * (rank * (box + 1) * max(1, max(abs(c) for c in coeff))) ** 2
    dtype = np.int64 if bound < 2**62 // 4 else object
    grids = np.meshgrid(*[np.arange(-box, box + 1, dtype=np.int64)] * len(free), indexing="ij")
    cols = [g.ravel().astype(dtype) for g in grids]
    cells = len(cols[0]) if cols else 1

    hits_a, hits_k, hits_sq = [], [], []
    for k in range(-half, half + 1):
        rest = np.zeros(cells, dtype=dtype)
        for j, i in enumerate(free):
            rest = rest + coeff[i] * cols[j]
        num = k - rest
        ok = num % coeff[pivot] == 0
        piv = num // coeff[pivot]
        ok &= np.abs(piv) <= box
        full = [None] * rank
        for j, i in enumerate(free):
            full[i] = cols[j]
        full[pivot] = piv
        sq = np.zeros(cells, dtype=dtype)
        for i in range(rank):
            acc = np.zeros(cells, dtype=dtype)
            for j in range(rank):
                if G[i][j]:
                    acc = acc + G[i][j] * full[j]
            sq = sq + full[i] * acc
        ok &= sq >= -2
        ap = _evaluate(amp, full, cells, dtype)
        if tb is None:
            ok &= ap > 0
        else:
            ok &= (ap > 0) | ((ap == 0) & (_evaluate(tb, full, cells, dtype) > 0))
        idx = np.nonzero(ok)[0]
        hits_a.append(np.stack([full[i][idx] for i in range(rank)], axis=1))
        hits_k.append(np.full(len(idx), k, dtype=dtype))
        hits_sq.append(sq[idx])
    A = np.concatenate(hits_a)
    K = np.concatenate(hits_k)
    SQ = np.concatenate(hits_sq)

    # (R, R) = a^2 - k^2 / v^2 >= -(n + 3)/2, checked on every hit
    bad = np.nonzero(2 * (SQ * vs - K * K) < -(P.n + 3) * vs)[0]
    if len(bad):
        a = tuple(int(x) for x in A[bad[0]])
        raise AssertionError(f"curve class of {a} violates (R,R) >= -(n+3)/2")

    # one representative per ray of theta^v(a) = (v^2 a - k v)/v^2
    W = A * vs - K[:, None] * np.array(P.v, dtype=dtype)[None, :]
    g = np.abs(W[:, 0])
    for i in range(1, rank):
        g = np.gcd(g, np.abs(W[:, i])) if dtype is np.int64 else np.array([gcd(int(x), int(y)) for x, y in zip(g, W[:, i])], dtype=object)
    g[g == 0] = 1
    Wn = W // g[:, None]
    maxabs = np.max(np.abs(A), axis=1) if len(A) else np.zeros(0, dtype=dtype)
    # preference: (a, v) >= 0, then small coordinates, then lexicographic
    order = np.lexsort(tuple(A[:, i] for i in reversed(range(rank))) + (maxabs, (K < 0).astype(np.int64)))
    seen: set[tuple[int, ...]] = set()
    keep = []
    for i in order:
        key = tuple(int(x) for x in Wn[i])
        if key not in seen:
            seen.add(key)
            keep.append(i)
    return MoriScan(
        P,
        tuple(tuple(int(x) for x in A[i]) for i in keep),
        tuple(int(K[i]) for i in keep),
        tuple(int(SQ[i]) for i in keep),
        box, requested, truncated, cells * (2 * half + 1),
    )


# -- fibration sections ------------------------------------------------------

@dataclass(frozen=True)
class FibrationSection:
    f: tuple[Fraction, ...]
    R: tuple[Fraction, ...]
    gram: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def _adjugate(G: Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    M = [[Fraction(x) for x in row] for row in G]
    from .lattice import det, solve_rational

    D = det(M)
    n = len(M)
    cols = [solve_rational(M, [int(i == j) for i in range(n)]) for j in range(n)]
    inv = [[cols[j][i] for j in range(n)] for i in range(n)]
    return [[int(inv[i][j] * D) for j in range(n)] for i in range(n)], int(D)


def fibration_section_search(n: int, L: IntLattice, box: int) -> FibrationSection | None:
    """Search L^v (dual coordinates |y_i| <= box) for f, R with f^2 = 0,
    (f, R) = 1 and R^2 = -(n+3)/2.

    Candidates are ordered by (max |y|, y), f first; the first hit wins.
    """
    if L.rank < 2:
        return None
    A, D = _adjugate(L.gram)
    r = L.rank
    rng = np.arange(-box, box + 1, dtype=np.int64)
    Y = np.stack([g.ravel() for g in np.meshgrid(*[rng] * r, indexing="ij")], axis=1).astype(object)
    Am = np.array(A, dtype=object)
    AY = Y @ Am.T
    quad = np.einsum("ij,ij->i", Y, AY)  # y^T A y = D x^2
    norm = np.max(np.abs(Y), axis=1)
    order = sorted(range(len(Y)), key=lambda i: (int(norm[i]), tuple(int(x) for x in Y[i])))
    target = -(n + 3) * D  # 2 y^T A y for R
    r_ok = np.array([2 * q == target for q in quad])
    r_idx = [i for i in order if r_ok[i]]
    if not r_idx:
        return None
    RY = Y[r_idx]
    for i in order:
        if quad[i] != 0 or not any(Y[i]):
            continue
        hits = np.nonzero(RY @ AY[i] == D)[0]
        if len(hits):
            yf, yr = Y[i], RY[hits[0]]
            f = tuple(Fraction(int(x), D) for x in Am.dot(yf))
            R = tuple(Fraction(int(x), D) for x in Am.dot(yr))
            g = ((L.square(f), L.pair(f, R)), (L.pair(R, f), L.square(R)))
            return FibrationSection(f, R, g)
    return None
