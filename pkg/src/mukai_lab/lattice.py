"""Exact integral lattices: pairings, Smith normal form, discriminant groups,
divisibility, saturation and orthogonal complements.

Everything here works over Python ints and ``fractions.Fraction``; no floats.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Matrix = list[list[int]]


class LatticeError(ValueError):
    """Raised for dimension mismatches, degenerate input and similar misuse."""


def _gcd_all(values: Iterable[int]) -> int:
    return reduce(gcd, (abs(int(x)) for x in values), 0)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip().replace("−", "-"))
    return Fraction(x)


def as_qvec(xs: Sequence) -> tuple[Fraction, ...]:
    return tuple(as_fraction(x) for x in xs)


def as_lvec(xs: Sequence) -> tuple[int, ...]:
    out = []
    for x in xs:
        q = as_fraction(x)
        if q.denominator != 1:
            raise LatticeError(f"expected an integral vector, got {list(xs)}")
        out.append(int(q))
    return tuple(out)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in zip(*a)]


def det(a: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    sign = 1
    out = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        out *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return sign * out


def solve_rational(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...]:
    """Solve the square system a x = b exactly."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise LatticeError("singular system")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(row[n] for row in m)


def coords_in_basis(basis: Sequence[Sequence], vec: Sequence) -> tuple[Fraction, ...]:
    """Rational coordinates of ``vec`` in the span of the rows of ``basis``.

    Raises LatticeError if ``vec`` is not in the rational span.
    """
    k = len(basis)
    if k == 0:
        if any(as_fraction(x) for x in vec):
            raise LatticeError("vector is not in the span")
        return ()
    rows = [[Fraction(x) for x in b] for b in basis]
    # normal equations on the Euclidean Gram matrix, then verify
    gram = [[sum(x * y for x, y in zip(r, s)) for s in rows] for r in rows]
    rhs = [sum(x * as_fraction(y) for x, y in zip(r, vec)) for r in rows]
    coeffs = solve_rational(gram, rhs)
    back = [sum(c * r[i] for c, r in zip(coeffs, rows)) for i in range(len(vec))]
    if any(x != as_fraction(y) for x, y in zip(back, vec)):
        raise LatticeError("vector is not in the span")
    return coeffs


# --------------------------------------------------------------------------
# Smith and Hermite normal forms


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U a V = D`` diagonal, ``U``, ``V`` unimodular.

    The diagonal entries are nonnegative and each divides the next; zeros
    come last.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [[int(x) for x in row] for row in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in d:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        done = False
            if done:
                # pivot must divide the whole remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                     if d[i][j] % d[t][t]),
                    None,
                )
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cands = [(abs(d[i][t]), i, t) for i in range(t, m) if d[i][t]]
            cands += [(abs(d[t][j]), t, j) for j in range(t, n) if d[t][j]]
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return d, u, v


def hermite_rows(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form; zero rows are dropped."""
    h = [[int(x) for x in r] for r in rows]
    if not h:
        return []
    ncols = len(h[0])
    out_row = 0
    for col in range(ncols):
        if out_row >= len(h):
            break
        while True:
            nz = [(abs(h[r][col]), r) for r in range(out_row, len(h)) if h[r][col]]
            if not nz:
                break
            _, p = min(nz)
            h[out_row], h[p] = h[p], h[out_row]
            done = True
            for r in range(out_row + 1, len(h)):
                if h[r][col]:
                    q = h[r][col] // h[out_row][col]
                    h[r] = [x - q * y for x, y in zip(h[r], h[out_row])]
                    if h[r][col]:
                        done = False
            if done:
                break
        if out_row < len(h) and h[out_row][col]:
            if h[out_row][col] < 0:
                h[out_row] = [-x for x in h[out_row]]
            piv = h[out_row][col]
            for r in range(out_row):
                q = h[r][col] // piv
                if q:
                    h[r] = [x - q * y for x, y in zip(h[r], h[out_row])]
            out_row += 1
    return [r for r in h[:out_row] if any(r)]


def unimodular_inverse(u: Sequence[Sequence[int]]) -> Matrix:
    n = len(u)
    cols = [solve_rational(u, [int(i == j) for i in range(n)]) for j in range(n)]
    out = [[cols[j][i] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise LatticeError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


# --------------------------------------------------------------------------
# Lattices


@dataclass(frozen=True)
class IntLattice:
    """A free Z-module of finite rank with an integral symmetric form."""

    gram: tuple[tuple[int, ...], ...]
    allow_degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(as_fraction(x)) for x in row) for row in self.gram)
        if any(as_fraction(x).denominator != 1 for row in self.gram for x in row):
            raise LatticeError("Gram matrix must be integral")
        object.__setattr__(self, "gram", g)
        r = len(g)
        if r < 1 or any(len(row) != r for row in g):
            raise LatticeError("Gram matrix must be square of size >= 1")
        if any(g[i][j] != g[j][i] for i in range(r) for j in range(r)):
            raise LatticeError("Gram matrix must be symmetric")
        if not self.allow_degenerate and self.determinant == 0:
            raise LatticeError("degenerate lattice (det = 0)")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def determinant(self) -> int:
        return int(det(self.gram))

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def _check(self, x):
        if len(x) != self.rank:
            raise LatticeError(f"vector of length {len(x)} in a rank {self.rank} lattice")

    def pair(self, a: Sequence, b: Sequence) -> Fraction:
        self._check(a)
        self._check(b)
        a = as_qvec(a)
        b = as_qvec(b)
        g = self.gram
        return sum(
            (a[i] * g[i][j] * b[j] for i in range(self.rank) for j in range(self.rank) if a[i] and b[j]),
            Fraction(0),
        )

    def square(self, a: Sequence) -> Fraction:
        return self.pair(a, a)

    def dual_pairing(self, a: Sequence) -> tuple[Fraction, ...]:
        """The functional (a, .) evaluated on the basis."""
        self._check(a)
        a = as_qvec(a)
        return tuple(sum(g * x for g, x in zip(row, a)) for row in self.gram)

    def signature(self) -> tuple[int, int, int]:
        return signature(self.gram)

    def change_basis(self, p: Sequence[Sequence[int]]) -> "IntLattice":
        """Lattice whose basis vectors are the columns of ``p``."""
        g = matmul(matmul(transpose(p), self.gram), p)
        return IntLattice(tuple(map(tuple, g)), allow_degenerate=self.allow_degenerate)


def pair(lattice: IntLattice, a: Sequence, b: Sequence) -> Fraction:
    return lattice.pair(a, b)


def signature(gram: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia via symmetric elimination over Q."""
    m = [[Fraction(x) for x in row] for row in gram]
    n = len(m)
    pos = neg = 0
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if m[i][i] != 0), None)
        if piv is None:
            off = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if m[i][j] != 0), None)
            if off is None:
                break
            i, j = off
            # e_i + e_j has nonzero square when m[i][i] = m[j][j] = 0
            for c in range(n):
                m[i][c] += m[j][c]
            for r in range(n):
                m[r][i] += m[r][j]
            piv = i
        m[k], m[piv] = m[piv], m[k]
        for row in m:
            row[k], row[piv] = row[piv], row[k]
        p = m[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = m[i][k] / p
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
        for i in range(k + 1, n):
            m[i][k] = Fraction(0)
        for j in range(k + 1, n):
            m[k][j] = Fraction(0)
        k += 1
    return pos, neg, n - pos - neg


# --------------------------------------------------------------------------
# Discriminant groups


@dataclass(frozen=True)
class DiscElement:
    """An element of L^v/L as residues modulo the invariant factors."""

    residues: tuple[int, ...]
    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "residues", tuple(int(r) % d for r, d in zip(self.residues, self.factors))
        )

    @property
    def order(self) -> int:
        return reduce(lcm, (d // gcd(r, d) for r, d in zip(self.residues, self.factors)), 1)

    def __neg__(self) -> "DiscElement":
        return DiscElement(tuple(-r for r in self.residues), self.factors)

    @property
    def is_zero(self) -> bool:
        return not any(self.residues)


@dataclass(frozen=True)
class DiscGroup:
    """L^v/L with a chosen Smith basis.

    ``lift_basis[i]`` is a generator of the i-th cyclic factor written in
    dual-basis coordinates; ``reducer`` maps dual coordinates to residues.
    """

    lattice: IntLattice
    invariant_factors: tuple[int, ...]
    lift_basis: tuple[tuple[int, ...], ...]
    reducer: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return reduce(lambda x, y: x * y, self.invariant_factors, 1)

    def element_from_dual(self, dual_coords: Sequence[int]) -> DiscElement:
        """Class of the functional with the given values on the basis."""
        res = tuple(sum(r * x for r, x in zip(row, dual_coords)) for row in self.reducer)
        return DiscElement(res, self.invariant_factors)

    def element(self, y: Sequence) -> DiscElement:
        """Class of y in L (x) Q, given in lattice coordinates; y must lie in L^v."""
        dual = self.lattice.dual_pairing(y)
        if any(x.denominator != 1 for x in dual):
            raise LatticeError("vector does not lie in the dual lattice")
        return self.element_from_dual([int(x) for x in dual])

    def form_value(self, y: Sequence) -> Fraction:
        """Discriminant form q(y) = y^2 mod 2Z (even lattice) or mod Z (odd)."""
        modulus = 2 if self.lattice.is_even else 1
        return self.lattice.square(y) % modulus


def discriminant_group(lattice: IntLattice) -> DiscGroup:
    if lattice.determinant == 0:
        raise LatticeError("discriminant group of a degenerate lattice")
    d, u, _ = smith_normal_form(lattice.gram)
    uinv = unimodular_inverse(u)
    idx = [i for i in range(lattice.rank) if d[i][i] > 1]
    factors = tuple(d[i][i] for i in idx)
    lifts = tuple(tuple(uinv[r][i] for r in range(lattice.rank)) for i in idx)
    reducer = tuple(tuple(u[i]) for i in idx)
    return DiscGroup(lattice, factors, lifts, reducer)


@dataclass(frozen=True)
class Divisibility:
    div: int
    primitive: bool
    dual_class: DiscElement


def divisibility(lattice: IntLattice, a: Sequence[int]) -> Divisibility:
    """div(a) with (a, L) = div(a) Z, primitivity, and the class of a/div(a)."""
    a = as_lvec(a)
    lattice._check(a)
    if not any(a):
        raise LatticeError("divisibility of the zero vector")
    dual = [int(x) for x in lattice.dual_pairing(a)]
    div = _gcd_all(dual)
    primitive = _gcd_all(a) == 1
    disc = discriminant_group(lattice)
    return Divisibility(div, primitive, disc.element_from_dual([x // div for x in dual]))


# --------------------------------------------------------------------------
# Sublattices


def saturate(lattice: IntLattice | None, span: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of (span (x) Q) cap L.

    An already saturated, independent input is returned unchanged; otherwise
    the Hermite basis of the saturation is returned.
    """
    rows = [as_lvec(s) for s in span]
    if not rows:
        return []
    if lattice is not None:
        for r in rows:
            lattice._check(r)
    d, _, v = smith_normal_form(rows)
    k = len(rows)
    diag = [d[i][i] for i in range(min(k, len(rows[0])))]
    if len(diag) < k or any(x == 0 for x in diag):
        raise LatticeError("dependent generators")
    if all(x == 1 for x in diag):
        return rows
    vinv = unimodular_inverse(v)
    return [tuple(r) for r in hermite_rows(vinv[:k])]


def is_saturated(span: Sequence[Sequence[int]]) -> bool:
    d, _, _ = smith_normal_form([as_lvec(s) for s in span])
    return all(d[i][i] == 1 for i in range(len(span)))


def kernel_basis(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Saturated basis (Hermite form) of {x in Z^n : rows . x = 0}."""
    if not rows:
        return [tuple(r) for r in identity(ncols)]
    d, _, v = smith_normal_form(rows)
    rnk = sum(1 for i in range(min(len(rows), ncols)) if d[i][i])
    ker = [[v[r][j] for r in range(ncols)] for j in range(rnk, ncols)]
    return [tuple(r) for r in hermite_rows(ker)]


def orthogonal_complement(lattice: IntLattice, sub: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Saturated basis of {x in L : (x, s) = 0 for all s in sub}."""
    sub = [as_lvec(s) for s in sub]
    if sub and not is_independent(sub):
        raise LatticeError("dependent generators")
    rows = [[int(x) for x in lattice.dual_pairing(s)] for s in sub]
    return kernel_basis(rows, lattice.rank)


def is_independent(rows: Sequence[Sequence[int]]) -> bool:
    d, _, _ = smith_normal_form(rows)
    k = len(rows)
    return k <= len(rows[0]) and all(d[i][i] for i in range(k))


def restrict(lattice: IntLattice, basis: Sequence[Sequence[int]], allow_degenerate=False) -> IntLattice:
    """The sublattice spanned by ``basis`` with the induced form."""
    g = [[int(lattice.pair(a, b)) for b in basis] for a in basis]
    return IntLattice(tuple(map(tuple, g)), allow_degenerate=allow_degenerate)
