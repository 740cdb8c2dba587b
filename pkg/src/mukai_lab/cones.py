"""Nef and movable cones of the Hilbert square of a K3 surface with Picard
rank one, computed from the Pell equations of its potential walls.

Divisors are written D = x h + y delta and measured by the slope
mu = -y / x; the positive cone is 0 <= mu < sqrt(d) on the side of interest.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .lattice import as_qvec
from .mukai import CurveClass, HilbPreset, to_h_delta_coords
from .pointed import PointedSublattice
from .quadform import hilb_pell_equation, represent_pell
from .surd import Surd, is_square
from .walls import (
    BRILL_NOETHER,
    FLOP_P_TYPE,
    HILBERT_CHOW,
    LGU,
    WallKind,
    classify_wall,
    line_class,
)

# (kind, (a, v), a^2) for the classes that can cut the positive cone of X^[2]
WALL_EQUATIONS = (
    (BRILL_NOETHER, 0, -2),
    (HILBERT_CHOW, 1, 0),
    (LGU, 2, 0),
    ("Spherical", 1, -2),
)
DIVISORIAL = (BRILL_NOETHER, HILBERT_CHOW, LGU)


@dataclass(frozen=True)
class Ray:
    """A ray x h + y delta; ``slope`` = -y/x, exact (Surd when irrational)."""

    slope: Surd
    vector: tuple[int, int] | None  # primitive integer (x, y), x > 0, when rational

    @classmethod
    def from_vector(cls, x: int, y: int) -> "Ray":
        g = gcd(x, y)
        x, y = x // g, y // g
        if x < 0:
            x, y = -x, -y
        return cls(Surd.rational(Fraction(-y, x)), (x, y))

    @classmethod
    def from_slope(cls, mu: Surd) -> "Ray":
        if mu.is_rational:
            q = Fraction(mu.p, mu.r)
            return cls.from_vector(q.denominator, -q.numerator)
        return cls(mu, None)

    def to_json(self):
        if self.vector is not None:
            return list(self.vector)
        return {"slope": str(self.slope)}


@dataclass(frozen=True)
class WallInfo:
    ray: Ray
    classes: tuple[tuple[int, int, int], ...]  # Mukai vectors (r, c, s) defining the wall
    kind: WallKind
    line_class: tuple[Fraction, Fraction] | None  # (alpha, beta) of the flopped line
    line_square: Fraction | None = None
    primitive_line: bool | None = None


@dataclass(frozen=True)
class Chamber:
    lower: Ray
    upper: Ray
    wall: WallInfo | None  # wall at the upper ray, None for a bare cone boundary


@dataclass(frozen=True)
class ConeReport:
    d: int
    movable: tuple[Ray, Ray]
    nef: tuple[Ray, Ray]
    movable_boundary: str
    chambers: tuple[Chamber, ...]
    walls: tuple[WallInfo, ...]


def _wall_slope(d: int, r: int, c: int, k: int) -> Fraction | None:
    """Slope of the divisor ray orthogonal to theta^v(a) for a = (r, c h, s)
    with (a, v) = k; that ray is (2r - k) h - 2 d c delta."""
    Y = 2 * r - k
    if Y == 0:
        return None
    return Fraction(2 * d * c, Y)


def _solutions(d: int, k: int, m: int, cmax: int) -> list[tuple[int, int, int]]:
    """Mukai vectors (r, c, s) with c in [1, cmax], (a, v) = k, a^2 = m and
    positive wall slope, via the Pell reduction (2r - k)^2 - 4 d c^2 = k^2 - 2m."""
    form, rhs, A, B, s_of = hilb_pell_equation(2, d, k, m)
    # X = 2 A r + B with A = -2 here; bound X by the conic
    xmax = isqrt(-form.c * cmax * cmax + rhs) + 1
    sols = represent_pell(form, rhs).in_box(max(xmax, cmax))
    out = []
    for X, c in sols:
        if not 1 <= c <= cmax or (X - B) % (2 * A):
            continue
        r = (X - B) // (2 * A)
        s = s_of(r)
        if s.denominator != 1:
            continue
        mu = _wall_slope(d, r, c, k)
        if mu is None or mu <= 0:
            continue
        out.append((r, c, int(s)))
    return out


def _cmax_below(d: int, k: int, m: int, mu: Surd) -> int:
    """Largest c whose wall slope can be below mu (slope grows with c)."""
    M = k * k - 2 * m
    if mu.is_rational:
        q = Fraction(mu.p, mu.r)
        denom = 4 * d * (d - q * q)
        if denom <= 0:
            return max(1, M)
        return isqrt(int(q * q * M / denom)) + 1
    # mu = sqrt(d): only square d could make this finite, handled by factoring
    return max(1, M)


def _is_primitive(a: Sequence[int]) -> bool:
    return gcd(*a) == 1


def movable_boundary(d: int) -> tuple[Surd, str]:
    """Slope of the non-h boundary of the movable cone and its type."""
    if is_square(d):
        return Surd.rational(isqrt(d)), "isotropic"
    from .quadform import pell_fundamental

    x1, y1 = pell_fundamental(d)
    best: tuple[Fraction, str] | None = (Fraction(d * y1, x1), BRILL_NOETHER)
    for kind, k, m in WALL_EQUATIONS:
        if kind not in DIVISORIAL:
            continue
        for a in _solutions(d, k, m, y1):
            if m == 0 and not _is_primitive(a):
                continue
            mu = _wall_slope(d, a[0], a[1], k)
            if mu < best[0]:
                best = (mu, kind)
    return Surd.rational(best[0]), best[1]


def _wall_info(pre: HilbPreset, mu: Fraction, classes: list[tuple[int, int, int]], inside: Sequence) -> WallInfo:
    P = pre.period
    # every class on one wall ray spans the same H together with v
    H = PointedSublattice.from_period(P, [classes[0]], positive=P.v)
    kind = classify_wall(H)
    ray = Ray.from_slope(Surd.rational(mu))
    lc = sq = prim = None
    if FLOP_P_TYPE in kind.matched:
        L = line_class(H, ample=inside)
        lc = to_h_delta_coords(pre, L.ambient)
        sq, prim = L.square, L.primitive
    return WallInfo(ray, tuple(classes), kind, lc, sq, prim)


def hilb2_cones(d: int) -> ConeReport:
    if d < 1:
        raise ValueError("d must be positive")
    pre = HilbPreset(2, d)
    mu_mov, mov_kind = movable_boundary(d)
    walls: dict[Fraction, list[tuple[int, int, int]]] = {}
    for kind, k, m in WALL_EQUATIONS:
        cmax = _cmax_below(d, k, m, mu_mov)
        for a in _solutions(d, k, m, cmax):
            if m == 0 and not _is_primitive(a):
                continue
            mu = _wall_slope(d, a[0], a[1], k)
            if Surd.rational(mu) > mu_mov:
                continue
            walls.setdefault(mu, []).append(a)
    h_ray = Ray.from_vector(1, 0)
    mov_ray = Ray.from_slope(mu_mov)
    infos = []
    prev = Fraction(0)
    for mu in sorted(walls):
        mid = (prev + mu) / 2
        inside = pre.from_h_delta(1, -mid)
        infos.append(_wall_info(pre, mu, sorted(walls[mu]), inside))
        prev = mu
    chambers = []
    lower = h_ray
    for w in infos:
        chambers.append(Chamber(lower, w.ray, w))
        lower = w.ray
    if not infos or infos[-1].ray.slope != mu_mov:
        chambers.append(Chamber(lower, mov_ray, None))
    nef_ray = infos[0].ray if infos else mov_ray
    return ConeReport(d, (h_ray, mov_ray), (h_ray, nef_ray), mov_kind, tuple(chambers), tuple(infos))


def _curve_coords(d: int, R) -> tuple[Fraction, Fraction]:
    if isinstance(R, CurveClass):
        return to_h_delta_coords(HilbPreset(2, d), R)
    R = as_qvec(R)
    if len(R) == 3:
        return to_h_delta_coords(HilbPreset(2, d), R)
    return R[0], R[1]


def orthogonal_slope(d: int, R) -> Surd | None:
    """Slope of the divisor ray R^perp, or None if it is the delta axis."""
    alpha, beta = _curve_coords(d, R)
    if beta == 0:
        return None
    # (x h + y delta, alpha h + beta delta) = 2 d x alpha - 2 y beta
    return Surd.rational(-d * alpha / beta)


def wall_meets_movable(d: int, R) -> bool:
    """Does R^perp cross the interior of the movable cone of X^[2]?"""
    mu = orthogonal_slope(d, R)
    if mu is None:
        return False
    mu_mov, _ = movable_boundary(d)
    return Surd.rational(0) < mu < mu_mov
