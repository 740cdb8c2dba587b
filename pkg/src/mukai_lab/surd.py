"""Exact quadratic irrationals (p + q sqrt(D)) / r."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


@lru_cache(maxsize=4096)
def squarefree_part(n: int) -> tuple[int, int]:
    """Return (k, m) with n = k^2 m and m squarefree (n >= 0)."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 0
    k, m = 1, 1
    p = 2
    rest = n
    while p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            m *= p
        p += 1 if p == 2 else 2
    return k, m * rest


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass(frozen=True, eq=False)
class Surd:
    """The real number (p + q sqrt(D)) / r in canonical form."""

    p: int
    q: int
    r: int
    D: int

    def __post_init__(self):
        p, q, r, D = int(self.p), int(self.q), int(self.r), int(self.D)
        if r == 0:
            raise ZeroDivisionError("surd with zero denominator")
        k, D = squarefree_part(D)
        q *= k
        if D == 1:
            p, q, D = p + q, 0, 0
        if q == 0:
            D = 0
        if r < 0:
            p, q, r = -p, -q, -r
        g = gcd(gcd(p, q), r)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)
        object.__setattr__(self, "r", r // g)
        object.__setattr__(self, "D", D)

    @classmethod
    def rational(cls, x) -> "Surd":
        x = Fraction(x)
        return cls(x.numerator, 0, x.denominator, 0)

    @classmethod
    def sqrt(cls, n: int) -> "Surd":
        return cls(0, 1, 1, n)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def _coerce(self, other) -> "Surd":
        if isinstance(other, Surd):
            if self.D and other.D and self.D != other.D:
                raise ValueError("surds with different radicands")
            return other
        return Surd.rational(other)

    def _parts(self, other: "Surd"):
        D = self.D or other.D
        return D

    def __add__(self, other):
        o = self._coerce(other)
        D = self._parts(o)
        return Surd(self.p * o.r + o.p * self.r, self.q * o.r + o.q * self.r, self.r * o.r, D)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.p, -self.q, self.r, self.D)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        D = self._parts(o)
        return Surd(self.p * o.p + self.q * o.q * D, self.p * o.q + self.q * o.p, self.r * o.r, D)

    __rmul__ = __mul__

    def sign(self) -> int:
        """Exact sign of p + q sqrt(D)."""
        p, q, D = self.p, self.q, self.D
        if q == 0 or D == 0:
            return (p > 0) - (p < 0)
        if p >= 0 and q >= 0:
            return 1 if (p or q) else 0
        if p <= 0 and q <= 0:
            return -1
        # opposite signs: compare p^2 with q^2 D
        lhs, rhs = p * p, q * q * D
        if lhs == rhs:
            return 0
        return (1 if p > 0 else -1) if lhs > rhs else (1 if q > 0 else -1)

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.p, self.q, self.r, self.D))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return (self.p + self.q * self.D ** 0.5) / self.r

    def __str__(self):
        if self.q == 0:
            return str(Fraction(self.p, self.r))
        body = f"{self.p}{'+' if self.q >= 0 else '-'}{abs(self.q)}*sqrt({self.D})"
        return body if self.r == 1 else f"({body})/{self.r}"

    def __repr__(self):
        return f"Surd({self})"
