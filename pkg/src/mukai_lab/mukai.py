"""Mukai vectors over a K3 Picard lattice, pointed periods, the projection
theta^v onto v^perp, and Hilbert-scheme presets in the (h, delta) basis."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .lattice import (
    IntLattice,
    LatticeError,
    as_fraction,
    as_lvec,
    as_qvec,
    orthogonal_complement,
)


@dataclass(frozen=True)
class K3Picard:
    """Neron-Severi lattice of a K3 surface; must be hyperbolic."""

    ns: IntLattice

    def __post_init__(self):
        pos, neg, zero = self.ns.signature()
        if pos != 1 or zero:
            raise LatticeError(f"NS lattice must have signature (1, rank-1), got ({pos}, {neg})")

    @classmethod
    def rank_one(cls, d: int) -> "K3Picard":
        if d < 1:
            raise LatticeError("degree parameter d must be positive")
        return cls(IntLattice(((2 * d,),)))

    @property
    def rank(self) -> int:
        return self.ns.rank


@dataclass(frozen=True)
class MukaiVector:
    r: int
    D: tuple[int, ...]
    s: int

    def __post_init__(self):
        object.__setattr__(self, "D", as_lvec(self.D))
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "s", int(self.s))

    @property
    def coords(self) -> tuple[int, ...]:
        return (self.r, *self.D, self.s)

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "MukaiVector":
        c = as_lvec(coords)
        return cls(c[0], c[1:-1], c[-1])

    def to_json(self) -> dict:
        return {"r": self.r, "D": list(self.D), "s": self.s}

    @classmethod
    def from_json(cls, obj: dict) -> "MukaiVector":
        return cls(obj["r"], tuple(obj["D"]), obj["s"])


def mukai_gram(picard: K3Picard) -> tuple[tuple[int, ...], ...]:
    """Gram of Z e + NS + Z f with (e, f) = -1 and e, f isotropic."""
    k = picard.rank
    n = k + 2
    g = [[0] * n for _ in range(n)]
    g[0][n - 1] = g[n - 1][0] = -1
    for i in range(k):
        for j in range(k):
            g[i + 1][j + 1] = picard.ns.gram[i][j]
    return tuple(map(tuple, g))


@dataclass(frozen=True)
class AlgMukaiLattice:
    picard: K3Picard

    @property
    def lattice(self) -> IntLattice:
        return IntLattice(mukai_gram(self.picard))

    def pair(self, a: MukaiVector, b: MukaiVector) -> int:
        return mukai_pairing(a, b, self.picard)


def mukai_pairing(a: MukaiVector, b: MukaiVector, picard: K3Picard) -> int:
    """(a, b) = D.D' - r s' - r' s."""
    if len(a.D) != picard.rank or len(b.D) != picard.rank:
        raise LatticeError("Mukai vectors live over a different Picard lattice")
    return int(picard.ns.pair(a.D, b.D)) - a.r * b.s - b.r * a.s


@dataclass(frozen=True)
class PointedPeriod:
    """An even lattice together with a primitive vector v of square 2n - 2 > 0."""

    lattice: IntLattice
    v: tuple[int, ...]

    def __post_init__(self):
        v = as_lvec(self.v)
        object.__setattr__(self, "v", v)
        if len(v) != self.lattice.rank:
            raise LatticeError("v has the wrong length")
        if gcd(*v) != 1:
            raise LatticeError("v must be primitive")
        sq = self.lattice.square(v)
        if sq <= 0 or sq % 2:
            raise LatticeError(f"v must have even positive square, got {sq}")

    @property
    def v_square(self) -> int:
        return int(self.lattice.square(self.v))

    @property
    def n(self) -> int:
        return self.v_square // 2 + 1

    def pair(self, a, b) -> Fraction:
        return self.lattice.pair(a, b)

    def v_perp(self) -> list[tuple[int, ...]]:
        return orthogonal_complement(self.lattice, [self.v])

    def h2_lattice(self) -> tuple[list[tuple[int, ...]], IntLattice]:
        """Basis of v^perp and the induced (Beauville-Bogomolov) lattice."""
        basis = self.v_perp()
        g = tuple(tuple(int(self.pair(a, b)) for b in basis) for a in basis)
        return basis, IntLattice(g)


@dataclass(frozen=True)
class CurveClass:
    """A class in v^perp (x) Q of a pointed period.

    Denominators are kept: they record where the class sits in H_2 / H^2.
    """

    period: PointedPeriod
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        c = as_qvec(self.coords)
        object.__setattr__(self, "coords", c)
        if self.period.pair(c, self.period.v) != 0:
            raise LatticeError("curve class must be orthogonal to v")

    @property
    def square(self) -> Fraction:
        return self.period.lattice.square(self.coords)

    def pair(self, other: Sequence) -> Fraction:
        return self.period.pair(self.coords, as_qvec(other))

    def __neg__(self) -> "CurveClass":
        return CurveClass(self.period, tuple(-x for x in self.coords))

    def scaled(self, k) -> "CurveClass":
        return CurveClass(self.period, tuple(as_fraction(k) * x for x in self.coords))

    @property
    def doubled_is_integral(self) -> bool:
        return all((2 * x).denominator == 1 for x in self.coords)


def theta_dual(period: PointedPeriod, a: Sequence) -> CurveClass:
    """Orthogonal projection a - ((a, v)/v^2) v onto v^perp."""
    a = as_qvec(a)
    if len(a) != period.lattice.rank:
        raise LatticeError("vector has the wrong length")
    c = period.pair(a, period.v) / period.v_square
    return CurveClass(period, tuple(x - c * y for x, y in zip(a, period.v)))


@dataclass(frozen=True)
class HilbPreset:
    """X^[n] for a K3 surface with Pic X = Z h, h^2 = 2d, sheaves of class v = (1, 0, 1 - n)."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 2 or self.d < 1:
            raise LatticeError("need n >= 2 and d >= 1")

    @property
    def picard(self) -> K3Picard:
        return K3Picard.rank_one(self.d)

    @property
    def period(self) -> PointedPeriod:
        return PointedPeriod(AlgMukaiLattice(self.picard).lattice, (1, 0, 1 - self.n))

    @property
    def h_class(self) -> tuple[Fraction, ...]:
        return as_qvec((0, 1, 0))

    @property
    def delta_class(self) -> tuple[Fraction, ...]:
        # sign chosen so that the flop line at d = 1 reads h - 3/2 delta
        return as_qvec((-1, 0, -(self.n - 1)))

    @property
    def v(self) -> tuple[int, ...]:
        return (1, 0, 1 - self.n)

    def h2_gram(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Beauville-Bogomolov form in the basis (h, delta)."""
        return ((2 * self.d, 0), (0, 2 - 2 * self.n))

    def h2_lattice(self) -> IntLattice:
        return IntLattice(self.h2_gram())

    def from_h_delta(self, alpha, beta) -> tuple[Fraction, ...]:
        alpha, beta = as_fraction(alpha), as_fraction(beta)
        return tuple(alpha * h + beta * e for h, e in zip(self.h_class, self.delta_class))

    def curve(self, alpha, beta) -> CurveClass:
        return CurveClass(self.period, self.from_h_delta(alpha, beta))

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d}


def hilbert_preset(n: int, d: int) -> HilbPreset:
    return HilbPreset(int(n), int(d))


def to_h_delta_coords(preset: HilbPreset, c) -> tuple[Fraction, Fraction]:
    """Coefficients (alpha, beta) with c = alpha h + beta delta."""
    coords = c.coords if isinstance(c, CurveClass) else as_qvec(c)
    if len(coords) != 3:
        raise LatticeError("expected a vector in the rank 3 Mukai lattice")
    alpha = coords[1]
    beta = -coords[0]
    if coords[2] != beta * -(preset.n - 1):
        raise LatticeError("class is not in the span of h and delta")
    return alpha, beta
