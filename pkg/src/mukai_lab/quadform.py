"""Representations m = a x^2 + 2 b x y + c y^2 by binary forms.

Two independent routes: an exhaustive box scan and a Pell-equation
description (fundamental solutions plus the automorph group), together with
the finite search for spherical classes in a pointed rank-2 lattice.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .lattice import LatticeError
from .pointed import PointedSublattice, Vec2, classes_on_line, ext_gcd
from .surd import Surd, is_square


@dataclass(frozen=True)
class BinaryForm:
    """a x^2 + 2 b x y + c y^2, i.e. the Gram matrix [[a, b], [b, c]]."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.disc == 0:
            raise LatticeError("degenerate binary form (b^2 - ac = 0)")

    @classmethod
    def from_gram(cls, gram) -> "BinaryForm":
        (a, b), (b2, c) = gram
        if b != b2:
            raise LatticeError("Gram matrix must be symmetric")
        return cls(int(a), int(b), int(c))

    @property
    def disc(self) -> int:
        return self.b * self.b - self.a * self.c

    @property
    def is_indefinite(self) -> bool:
        return self.disc > 0

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + 2 * self.b * x * y + self.c * y * y

    def swapped(self) -> "BinaryForm":
        return BinaryForm(self.c, self.b, self.a)


def represent_bounded(form: BinaryForm, m: int, bound: int) -> list[Vec2]:
    """Every (x, y) with |x|, |y| <= bound and form(x, y) = m, by direct scan."""
    a, b2, c = form.a, 2 * form.b, form.c
    out = []
    rng = range(-bound, bound + 1)
    for x in rng:
        ax2 = a * x * x
        bx = b2 * x
        for y in rng:
            if ax2 + (bx + c * y) * y == m:
                out.append((x, y))
    return out


def pell_fundamental(D: int) -> tuple[int, int]:
    """Least (t, u), u > 0, with t^2 - D u^2 = 1, via the continued fraction of sqrt(D)."""
    if D <= 0 or is_square(D):
        raise ValueError("Pell's equation needs a positive non-square D")
    a0 = isqrt(D)
    m, d, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while p * p - D * q * q != 1:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


@dataclass(frozen=True)
class PellSolutions:
    """Finite description of {(x, y) : form(x, y) = m}.

    Either a finite list (``finite``), a union of lines through the origin
    (``lines``, for m = 0 and square discriminant), or finitely many orbit
    representatives under the automorph ``automorph`` and -1.
    """

    form: BinaryForm
    m: int
    representatives: tuple[Vec2, ...]
    automorph: tuple[tuple[int, int], tuple[int, int]] | None = None
    unit: tuple[int, int] | None = None
    lines: tuple[Vec2, ...] = ()
    finite: bool = True
    transposed: bool = False  # data describe the form with x and y swapped

    def in_box(self, bound: int) -> list[Vec2]:
        """All solutions with |x|, |y| <= bound, sorted."""
        out = self._in_box(bound)
        if self.transposed:
            out = {(y, x) for x, y in out}
        return sorted(out)

    def _in_box(self, bound: int) -> set[Vec2]:
        out: set[Vec2] = set()
        for x, y in self.representatives:
            if abs(x) <= bound and abs(y) <= bound:
                out.add((x, y))
        for dx, dy in self.lines:
            kmax = bound // max(abs(dx), abs(dy))
            for k in range(-kmax, kmax + 1):
                out.add((k * dx, k * dy))
        if self.automorph is not None:
            for rep in self.representatives:
                out.update(self._orbit_in_box(rep, bound))
        return out

    def _orbit_in_box(self, rep: Vec2, bound: int) -> set[Vec2]:
        f = self.form
        a, b, delta = f.a, f.b, f.disc
        t, u = self.unit
        root = Surd.sqrt(delta)
        limit = 2 * bound * root
        found: set[Vec2] = set()

        def to_xy(X, Y):
            return ((X - b * Y) // a, Y)

        for direction in (1, -1):
            X, Y = a * rep[0] + b * rep[1], rep[1]
            while True:
                x, y = to_xy(X, Y)
                if abs(x) <= bound and abs(y) <= bound:
                    found.add((x, y))
                    found.add((-x, -y))
                alpha = X + Y * root
                beta = X - Y * root
                sa, sb = alpha.sign() or 1, beta.sign() or 1
                # |alpha| - |beta| only grows forward (|beta| - |alpha| backward),
                # and bounds 2 |Y| sqrt(delta) from below
                gap = (sa * alpha - sb * beta) * direction
                if gap > limit:
                    break
                if direction == 1:
                    X, Y = t * X + delta * u * Y, u * X + t * Y
                else:
                    X, Y = t * X - delta * u * Y, -u * X + t * Y
        return found

    def with_constraint(self, p: int, q: int, k: int) -> list[Vec2]:
        return _solve_on_line(self.form, self.m, p, q, k)


def _solve_on_line(form: BinaryForm, m: int, p: int, q: int, k: int) -> list[Vec2]:
    """All integral (x, y) with p x + q y = k and form(x, y) = m."""
    g, x0, y0 = ext_gcd(p, q)
    if g == 0:
        raise LatticeError("empty linear constraint")
    if k % g:
        return []
    x0, y0 = x0 * (k // g), y0 * (k // g)
    dx, dy = q // g, -p // g
    A = form(dx, dy)
    B = form.a * x0 * dx + form.b * (x0 * dy + y0 * dx) + form.c * y0 * dy
    C = form(x0, y0) - m
    # A j^2 + 2 B j + C = 0
    if A == 0:
        if B == 0:
            if C == 0:
                raise LatticeError("the constraint line lies on the conic: infinitely many solutions")
            return []
        if C % (2 * B):
            return []
        js = [-C // (2 * B)]
    else:
        disc = B * B - A * C
        if disc < 0 or not is_square(disc):
            return []
        s = isqrt(disc)
        js = [Fraction(-B + s, A), Fraction(-B - s, A)]
        js = sorted({int(j) for j in js if j.denominator == 1})
    return sorted((x0 + j * dx, y0 + j * dy) for j in js)


def represent_pell(form: BinaryForm, m: int, constraint: tuple[int, int, int] | None = None):
    """Solutions of form(x, y) = m for an indefinite form.

    With ``constraint = (p, q, k)`` the solutions on p x + q y = k are
    returned as a sorted list; otherwise a PellSolutions description.
    """
    if not form.is_indefinite:
        raise LatticeError("represent_pell needs an indefinite form (b^2 - ac > 0)")
    if constraint is not None:
        return _solve_on_line(form, m, *constraint)
    if form.a == 0 and form.c != 0:
        sw = represent_pell(form.swapped(), m)
        return PellSolutions(sw.form, m, sw.representatives, sw.automorph, sw.unit,
                             sw.lines, sw.finite, transposed=not sw.transposed)
    delta = form.disc
    if is_square(delta):
        return _square_disc(form, m)
    a, b, c = form.a, form.b, form.c
    if m == 0:
        return PellSolutions(form, 0, ((0, 0),))
    t, u = pell_fundamental(delta)
    N = a * m
    if N > 0:
        ymax = isqrt(u * u * N // (2 * (t + 1))) + 1
    else:
        ymax = isqrt(u * u * (-N) // (2 * (t - 1))) + 1
    reps = set()
    for Y in range(0, ymax + 1):
        X2 = N + delta * Y * Y
        if X2 < 0 or not is_square(X2):
            continue
        X = isqrt(X2)
        for XX in {X, -X}:
            if (XX - b * Y) % a == 0:
                reps.add(((XX - b * Y) // a, Y))
    auto = ((t - b * u, -c * u), (a * u, t + b * u))
    return PellSolutions(form, m, tuple(sorted(reps)), auto, (t, u), finite=not reps)


def _square_disc(form: BinaryForm, m: int) -> PellSolutions:
    a, b, c = form.a, form.b, form.c
    r = isqrt(form.disc)
    if m == 0:
        if a != 0:
            dirs = []
            for beta in (b - r, b + r):  # a x + beta y = 0
                g = gcd(beta, a)
                dirs.append((beta // g, -a // g))
        else:
            g = gcd(c, 2 * b)
            dirs = [(1, 0), (c // g, -2 * b // g)]
        norm = []
        for dx, dy in dirs:
            if dx < 0 or (dx == 0 and dy < 0):
                dx, dy = -dx, -dy
            norm.append((dx, dy))
        return PellSolutions(form, 0, ((0, 0),), lines=tuple(sorted(set(norm))), finite=False)
    sols = set()
    if a == 0 and c == 0:
        if m % (2 * b) == 0:
            for x in _divisors(m // (2 * b)):
                for sx in (x, -x):
                    sols.add((sx, m // (2 * b) // sx))
        return PellSolutions(form, m, tuple(sorted(sols)))
    if a == 0:
        sw = _square_disc(form.swapped(), m)
        return PellSolutions(form, m, tuple(sorted((y, x) for x, y in sw.representatives)))
    N = a * m
    # (X - r Y)(X + r Y) = N with X = a x + b y
    for d1 in _divisors(N):
        for u in (d1, -d1):
            w = N // u
            if (u + w) % 2 or (w - u) % (2 * r):
                continue
            X, Y = (u + w) // 2, (w - u) // (2 * r)
            if (X - b * Y) % a == 0:
                sols.add(((X - b * Y) // a, Y))
    return PellSolutions(form, m, tuple(sorted(sols)))


def spherical_with_pairing(H: PointedSublattice, target: int) -> list[Vec2]:
    """All w in H with w^2 = -2 and |(w, v)| <= target (H coordinates)."""
    H.require_hyperbolic()
    out = []
    for k in range(-target, target + 1):
        out.extend(classes_on_line(H, H.v, k, -2, -2))
    return sorted(out)


def finiteness_bounds(H: PointedSublattice, target: int) -> tuple[Fraction, Fraction]:
    """Bounds |alpha| <= A, beta^2 <= B for w = alpha v + beta w0 solutions.

    w0 generates v^perp in H; w0^2 = -m < 0.
    """
    w0 = H.v_perp_generator()
    vsq = Fraction(H.v_square)
    m = -H.square(w0)
    return Fraction(target) / vsq, (Fraction(target) ** 2 / vsq + 2) / m


def hilb_pell_equation(n: int, d: int, k: int, m: int):
    """Reduce {a = (r, c h, s) : a^2 = m, (a, v) = k} over X^[n] to a Pell equation.

    The coefficients are read off the Mukai Gram matrix: eliminating s with
    the linear condition leaves A r^2 + B r + C c^2 = m, and completing the
    square gives X^2 - (-4 A C) c^2 = 4 A m + B^2 with X = 2 A r + B.
    Returns (form, rhs, A, B, s_of) where s_of(r) recovers s.
    """
    from .mukai import HilbPreset  # local import keeps module deps one-way

    pre = HilbPreset(n, d)
    L = pre.period.lattice
    v = pre.v
    # (a, v) = lr * r + ls * s for a = (r, c, s)
    lr = int(L.pair((1, 0, 0), v))
    ls = int(L.pair((0, 0, 1), v))
    if ls == 0 or L.pair((0, 1, 0), v) != 0:
        raise LatticeError("unexpected v for a Hilbert scheme preset")

    def s_of(r: int) -> Fraction:
        return Fraction(k - lr * r, ls)

    def q(r, c):
        s = s_of(r)
        return L.square((r, c, s))

    C0 = q(0, 0)
    A = (q(1, 0) + q(-1, 0)) / 2 - C0
    B = (q(1, 0) - q(-1, 0)) / 2
    C = q(0, 1) - C0
    if C0 != 0:
        # constant term: fold into the right-hand side
        m_eff = m - C0
    else:
        m_eff = m
    if any(x.denominator != 1 for x in (A, B, C, m_eff)):
        raise LatticeError("non-integral reduction; pairing with v does not fix s integrally")
    A, B, C, m_eff = int(A), int(B), int(C), int(m_eff)
    form = BinaryForm(1, 0, 4 * A * C)
    rhs = 4 * A * m_eff + B * B
    return form, rhs, A, B, s_of
