"""Rank-2 pointed sublattices (H, v) and exact enumeration of classes on the
lines (w, u) = k inside them."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Sequence

from .lattice import (
    IntLattice,
    LatticeError,
    as_lvec,
    as_qvec,
    coords_in_basis,
    saturate,
)
from .mukai import PointedPeriod

Vec2 = tuple[int, int]


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class PointedSublattice:
    """A rank-2 lattice H with distinguished v, optionally embedded in a period.

    ``positive`` is a class in H (x) Q of positive square fixing which
    spherical classes count as effective; it defaults to v.
    """

    gram: tuple[tuple[int, int], tuple[int, int]]
    v: Vec2
    basis: tuple[tuple[int, ...], ...] | None = None
    period: PointedPeriod | None = field(default=None, compare=False)
    positive: tuple[Fraction, Fraction] | None = None

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        if len(g) != 2 or any(len(r) != 2 for r in g) or g[0][1] != g[1][0]:
            raise LatticeError("H must have a symmetric 2x2 Gram matrix")
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "v", as_lvec(self.v))
        if self.positive is not None:
            object.__setattr__(self, "positive", as_qvec(self.positive))
        if self.v_square <= 0:
            raise LatticeError("v must have positive square")

    # -- construction ---------------------------------------------------

    @classmethod
    def from_gram(cls, gram, v: Sequence[int] = (1, 0), positive=None) -> "PointedSublattice":
        return cls(tuple(map(tuple, gram)), tuple(v), positive=positive)

    @classmethod
    def from_period(cls, period: PointedPeriod, vectors: Sequence[Sequence[int]], positive=None) -> "PointedSublattice":
        """Saturation of span(v, vectors...) in the period lattice (rank 2)."""
        gens = [period.v] + [as_lvec(x) for x in vectors]
        basis = saturate(period.lattice, gens[:2] if len(gens) >= 2 else gens)
        if len(basis) != 2:
            raise LatticeError("a pointed sublattice needs rank 2")
        for extra in gens[2:]:
            coords_in_basis(basis, extra)
        vc = coords_in_basis(basis, period.v)
        if any(x.denominator != 1 for x in vc):
            raise LatticeError("v is not in the sublattice")
        g = tuple(tuple(int(period.pair(a, b)) for b in basis) for a in basis)
        pos = None
        if positive is not None:
            pos = coords_in_basis(basis, positive)
        return cls(g, tuple(int(x) for x in vc), tuple(map(tuple, basis)), period, pos)

    # -- basic arithmetic -----------------------------------------------

    def pair(self, a: Sequence, b: Sequence) -> Fraction:
        a, b = as_qvec(a), as_qvec(b)
        g = self.gram
        return a[0] * (g[0][0] * b[0] + g[0][1] * b[1]) + a[1] * (g[1][0] * b[0] + g[1][1] * b[1])

    def square(self, a: Sequence) -> Fraction:
        return self.pair(a, a)

    @property
    def v_square(self) -> int:
        return int(self.square(self.v))

    @property
    def n(self) -> int:
        return self.v_square // 2 + 1

    @property
    def determinant(self) -> int:
        g = self.gram
        return g[0][0] * g[1][1] - g[0][1] ** 2

    @property
    def is_hyperbolic(self) -> bool:
        return self.determinant < 0

    def require_hyperbolic(self):
        if not self.is_hyperbolic:
            raise LatticeError("H must have signature (1, 1)")

    @property
    def lattice(self) -> IntLattice:
        return IntLattice(self.gram, allow_degenerate=True)

    @property
    def effectivity_ray(self) -> tuple[Fraction, Fraction]:
        return self.positive if self.positive is not None else as_qvec(self.v)

    def to_ambient(self, w: Sequence) -> tuple:
        if self.basis is None:
            raise LatticeError("H has no ambient embedding")
        w = as_qvec(w)
        out = tuple(w[0] * a + w[1] * b for a, b in zip(*self.basis))
        if all(x.denominator == 1 for x in out):
            return tuple(int(x) for x in out)
        return out

    def from_ambient(self, x: Sequence) -> tuple[Fraction, ...]:
        if self.basis is None:
            raise LatticeError("H has no ambient embedding")
        return coords_in_basis(self.basis, x)

    def with_v(self, v: Sequence[int], positive=None) -> "PointedSublattice":
        return PointedSublattice(self.gram, tuple(v), self.basis, self.period,
                                 positive if positive is not None else self.positive)

    def v_perp_generator(self) -> Vec2:
        """Primitive generator of v^perp in H."""
        c1, c2 = (int(x) for x in _functional(self, self.v))
        g = gcd(c1, c2)
        return (c2 // g, -c1 // g)


def _functional(H: PointedSublattice, u: Sequence) -> tuple[Fraction, Fraction]:
    """Coefficients of x -> (x, u) in H coordinates."""
    u = as_qvec(u)
    g = H.gram
    return (g[0][0] * u[0] + g[0][1] * u[1], g[1][0] * u[0] + g[1][1] * u[1])


def classes_on_line(H: PointedSublattice, u: Sequence, k, lo, hi=None) -> list[Vec2]:
    """All integral w in H with (w, u) = k and lo <= w^2 (<= hi).

    ``u`` must have positive square, so the line is a coset of a negative
    definite rank-1 lattice and the search is finite.
    """
    c1, c2 = _functional(H, u)
    den = 1
    for x in (c1, c2, Fraction(k)):
        den = den * x.denominator // gcd(den, x.denominator)
    c1, c2, kk = int(c1 * den), int(c2 * den), Fraction(k) * den
    if kk.denominator != 1:
        return []
    kk = int(kk)
    if H.square(u) <= 0:
        raise LatticeError("line enumeration needs a functional of positive square")
    g, x, y = ext_gcd(c1, c2)
    if g == 0 or kk % g:
        return []
    p = (x * (kk // g), y * (kk // g))
    d = (c2 // g, -c1 // g)
    A = -int(H.square(d))  # > 0
    B = int(H.pair(p, d))
    C = int(H.square(p))
    # w(t) = p + t d, w(t)^2 = -A t^2 + 2 B t + C
    disc = B * B + A * (C - Fraction(lo))
    if disc < 0:
        return []
    s = isqrt(int(disc)) + 1
    t_lo = (B - s) // A - 1
    t_hi = -((-(B + s)) // A) + 1
    out = []
    for t in range(t_lo, t_hi + 1):
        w = (p[0] + t * d[0], p[1] + t * d[1])
        q = -A * t * t + 2 * B * t + C
        if q >= lo and (hi is None or q <= hi):
            out.append(w)
    return sorted(out)


def classes_with(H: PointedSublattice, square: int, pairing: int) -> list[Vec2]:
    """All w in H with w^2 = square and (w, v) = pairing."""
    return classes_on_line(H, H.v, pairing, square, square)


def iter_pairings(limit: int) -> Iterator[int]:
    yield 0
    for k in range(1, limit + 1):
        yield k
        yield -k
