"""Eichler-type orbit invariants of primitive lattice vectors and the
square-divisor bound on the number of orbits."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import DiscElement, IntLattice, LatticeError, as_lvec, discriminant_group, divisibility

# The invariants decide O~(L)-orbits only under Eichler's hypothesis (L contains
# two hyperbolic planes); that hypothesis is not checked here.
EICHLER_NOTE = "conditional on L containing U + U (Eichler criterion); not verified"


@dataclass(frozen=True)
class OrbitInvariants:
    square: int
    div: int
    dual_class: DiscElement
    order: int
    q_value: Fraction  # discriminant form of a/div


def orbit_invariants(L: IntLattice, a: Sequence[int]) -> OrbitInvariants:
    a = as_lvec(a)
    d = divisibility(L, a)
    if not d.primitive:
        raise LatticeError("orbit invariants need a primitive vector")
    disc = discriminant_group(L)
    y = tuple(Fraction(x, d.div) for x in a)
    return OrbitInvariants(int(L.square(a)), d.div, d.dual_class, d.dual_class.order, disc.form_value(y))


@dataclass(frozen=True)
class OrbitComparison:
    equal: bool  # strict verdict: invariants agree with the dual classes equal
    direct: bool
    negated: bool  # dual classes agree up to a global sign
    note: str = EICHLER_NOTE


def same_orbit(L: IntLattice, a: Sequence[int], b: Sequence[int]) -> OrbitComparison:
    ia, ib = orbit_invariants(L, a), orbit_invariants(L, b)
    base = ia.square == ib.square and ia.div == ib.div
    direct = base and ia.dual_class == ib.dual_class
    negated = base and (ia.dual_class == ib.dual_class or ia.dual_class == -ib.dual_class)
    return OrbitComparison(direct, direct, negated)


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (inputs here are small)."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def square_divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p ** (2 * i) for d in divs for i in range(e // 2 + 1)]
    return sorted(divs)


def orbit_count_bound(n: int) -> int:
    """Number of square divisors of (n + 3)(n - 1)."""
    if n < 2:
        raise LatticeError("n must be at least 2")
    total = 1
    for e in factorize((n + 3) * (n - 1)).values():
        total *= e // 2 + 1
    return total
