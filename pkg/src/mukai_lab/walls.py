"""Potential walls: classification of pointed rank-2 sublattices, P-type
detection, spherical reflections, partitions of v and their strata."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Sequence

from .lattice import LatticeError, as_lvec, as_qvec
from .mukai import CurveClass, theta_dual
from .pointed import PointedSublattice, Vec2, classes_on_line, classes_with
from .quadform import BinaryForm, represent_pell, spherical_with_pairing

__all__ = [
    "BRILL_NOETHER", "HILBERT_CHOW", "LGU", "FLOP_P_TYPE", "FLOP_OTHER", "NO_WALL",
    "Witness", "WallKind", "PTypeResult", "LineClass", "Partition", "StratumInfo",
    "PointedSublattice", "classify_wall", "is_p_type", "decompose_v", "reflect",
    "is_effective", "is_minimal", "minimalize", "enumerate_partitions", "refines",
    "classify_stratum", "line_class", "project_to_v_perp",
]

BRILL_NOETHER = "BrillNoether"
HILBERT_CHOW = "HilbertChow"
LGU = "LiGiesekerUhlenbeck"
FLOP_P_TYPE = "FlopPType"
FLOP_OTHER = "FlopOther"
NO_WALL = "NoWallCondition"


@dataclass(frozen=True)
class Witness:
    vector: Vec2
    condition: str
    square: int
    pairing: int


@dataclass(frozen=True)
class WallKind:
    matched: frozenset[str]
    witnesses: tuple[Witness, ...]

    def __contains__(self, kind: str) -> bool:
        return kind in self.matched


@dataclass(frozen=True)
class PTypeResult:
    """Verdict of the P-type test with its certificate.

    ``witness`` has pairing +v^2/2; ``violating`` is a spherical class of
    strictly smaller |pairing| when one exists.
    """

    p_type: bool
    witness: Vec2 | None
    violating: Vec2 | None

    def __bool__(self) -> bool:
        return self.p_type


def _primitive(w: Sequence[int]) -> bool:
    return gcd(*w) == 1


def _half_v_square(H: PointedSublattice) -> Fraction:
    return Fraction(H.v_square, 2)


def is_p_type(H: PointedSublattice) -> PTypeResult:
    H.require_hyperbolic()
    half = _half_v_square(H)
    sph = spherical_with_pairing(H, int(half))
    pairs = {w: int(H.pair(w, H.v)) for w in sph}
    smaller = [w for w in sph if abs(pairs[w]) < half]
    exact = sorted(w for w in sph if pairs[w] == half)
    if smaller:
        z = H.effectivity_ray
        smaller.sort(key=lambda w: (abs(pairs[w]), not is_effective(H, w, z), w))
        return PTypeResult(False, exact[0] if exact else None, smaller[0])
    if exact:
        return PTypeResult(True, exact[0], None)
    return PTypeResult(False, None, None)


def classify_wall(H: PointedSublattice) -> WallKind:
    """Every numeric wall condition met by some class of H, with witnesses."""
    H.require_hyperbolic()
    half = _half_v_square(H)
    matched: set[str] = set()
    witnesses: list[Witness] = []

    def add(kind, w, cond):
        matched.add(kind)
        witnesses.append(Witness(w, cond, int(H.square(w)), int(H.pair(w, H.v))))

    for w in classes_with(H, -2, 0):
        add(BRILL_NOETHER, w, "a^2 = -2, (a, v) = 0")
    divisorial = set()
    for k, kind in ((1, HILBERT_CHOW), (2, LGU)):
        for sign in (1, -1):
            for w in classes_with(H, 0, sign * k):
                if _primitive(w):
                    divisorial.add(w)
                    add(kind, w, f"a^2 = 0, |(a, v)| = {k}")
    pt = is_p_type(H)
    if pt:
        add(FLOP_P_TYPE, pt.witness, "a^2 = -2, (a, v) = v^2/2, no spherical class of smaller pairing")
    for k in range(1, int(half) + 1):
        for sign in (1, -1):
            for w in classes_on_line(H, H.v, sign * k, -2):
                if w in divisorial:
                    continue
                if pt and H.square(w) == -2 and k == half:
                    continue
                add(FLOP_OTHER, w, "a^2 >= -2, 0 < |(a, v)| <= v^2/2")
    if not matched:
        matched.add(NO_WALL)
    return WallKind(frozenset(matched), tuple(witnesses))


# -- effectivity and reflections ---------------------------------------------

def _sign_first(w: Sequence) -> int:
    for x in w:
        if x:
            return 1 if x > 0 else -1
    return 0


def is_effective(H: PointedSublattice, w: Sequence[int], z=None) -> bool:
    """Lattice-level effectivity of a spherical class: (w, z) > 0, ties broken
    by the sign of the first nonzero coordinate. ``z`` defaults to the
    effectivity ray of H."""
    z = H.effectivity_ray if z is None else as_qvec(z)
    p = H.pair(w, z)
    if p:
        return p > 0
    return _sign_first(w) > 0


def reflect(H: PointedSublattice, w: Sequence[int], x: Sequence) -> tuple:
    """Spherical reflection x -> x + (x, w) w."""
    if H.square(w) != -2:
        raise LatticeError("reflections are defined for spherical classes only")
    c = H.pair(x, w)
    out = tuple(as_qvec(x)[i] + c * w[i] for i in range(2))
    if all(t.denominator == 1 for t in out):
        return tuple(int(t) for t in out)
    return out


def _integral_ray(z) -> Vec2:
    z = as_qvec(z)
    den = 1
    for t in z:
        den = den * t.denominator // gcd(den, t.denominator)
    zi = [int(t * den) for t in z]
    g = gcd(*zi)
    return (zi[0] // g, zi[1] // g)


def _separating_sphericals(H: PointedSublattice, cur: Vec2, z) -> list[Vec2]:
    """Effective spherical w (w.r.t. z) with (w, cur) < 0.

    With a = (w, z) >= 0 and b = -(w, cur) > 0 the Gram of (z, cur) gives
    cur^2 a^2 + 2 (z, cur) a b + z^2 b^2 = 2((z, cur)^2 - z^2 cur^2), which
    bounds a and b, hence w; the spherical classes in that box come from
    the Pell orbits.
    """
    zi = _integral_ray(z)
    zz, vv, zv = H.square(zi), H.square(cur), H.pair(zi, cur)
    if zz <= 0:
        raise LatticeError("the effectivity ray must have positive square")
    if zv <= 0:
        raise LatticeError("v and the effectivity ray lie in opposite positive cones")
    K = 2 * (zv * zv - zz * vv)
    amax = isqrt(int(K / vv)) + 1
    bmax = isqrt(int(K / zz)) + 1
    # w solves (w, z) = a, (w, cur) = -b
    (p, q), (r, t) = (_functional_int(H, zi), _functional_int(H, cur))
    det = p * t - q * r
    if det == 0:  # cur lies on the ray itself
        return []
    bound = (max(abs(t) + abs(q), abs(r) + abs(p)) * max(amax, bmax)) // abs(det) + 1
    out = []
    for w in represent_pell(BinaryForm.from_gram(H.gram), -2).in_box(bound):
        if H.pair(w, cur) < 0 and is_effective(H, w, zi):
            out.append(w)
    return out


def _functional_int(H: PointedSublattice, u: Vec2) -> tuple[int, int]:
    g = H.gram
    return (g[0][0] * u[0] + g[0][1] * u[1], g[1][0] * u[0] + g[1][1] * u[1])


def is_minimal(H: PointedSublattice) -> bool:
    return not _separating_sphericals(H, H.v, H.effectivity_ray)


def minimalize(H: PointedSublattice, max_steps: int = 10_000) -> tuple[Vec2, list[Vec2]]:
    """Reflect v into the chamber of the effectivity ray.

    Returns (v0, reflections); applying the reflections in order to v0 gives v.
    Each step uses the separating wall of most negative pairing with the
    current vector, which strictly shrinks the hyperbolic distance to the ray.
    """
    H.require_hyperbolic()
    z = H.effectivity_ray
    cur = H.v
    found: list[Vec2] = []
    for _ in range(max_steps):
        cands = _separating_sphericals(H, cur, z)
        if not cands:
            return cur, found[::-1]
        w = min(cands, key=lambda w: (H.pair(w, cur), w))
        cur = reflect(H, w, cur)
        found.append(w)
    raise LatticeError("minimalization did not terminate")


def decompose_v(H: PointedSublattice) -> tuple[Vec2, Vec2]:
    """v = s + t with s, t spherical and (s, v) = (t, v) = v^2/2."""
    pt = is_p_type(H)
    if not pt:
        raise LatticeError("H is not of P type")
    if not is_minimal(H):
        raise LatticeError("v is not minimal; run minimalize first")
    s = pt.witness
    t = (H.v[0] - s[0], H.v[1] - s[1])
    if t < s and H.pair(t, H.v) == _half_v_square(H):
        s, t = t, s
    # t^2 = v^2 - 2 (s, v) + s^2
    assert H.square(t) == H.v_square - 2 * H.pair(s, H.v) - 2 == -2
    return s, t


# -- line classes ---------------------------------------------------------------

def project_to_v_perp(H: PointedSublattice, a: Sequence) -> tuple[Fraction, Fraction]:
    """a - ((a, v)/v^2) v in H coordinates."""
    a = as_qvec(a)
    c = H.pair(a, H.v) / H.v_square
    return (a[0] - c * H.v[0], a[1] - c * H.v[1])


@dataclass(frozen=True)
class LineClass:
    """Class of a line in the plane contracted by a P-type wall."""

    R: tuple[Fraction, Fraction]  # H coordinates
    ambient: CurveClass | None
    square: Fraction
    primitive: bool
    s: Vec2
    t: Vec2


def line_class(H: PointedSublattice, side: int = 1, ample=None) -> LineClass:
    """R = +-theta^v(s); with ``ample`` (ambient or H coordinates) the sign is
    chosen so that side * (R, ample) > 0."""
    s, t = decompose_v(H)
    R = project_to_v_perp(H, s)
    amb = theta_dual(H.period, H.to_ambient(s)) if H.period is not None else None
    sign = 1 if side >= 0 else -1
    if ample is not None:
        ample = as_qvec(ample)
        if amb is not None and len(ample) == H.period.lattice.rank:
            p = amb.pair(ample)
        else:
            p = H.pair(R, ample)
        if p == 0:
            raise LatticeError("the ample class is orthogonal to the line class")
        if p < 0:
            sign = -sign
    if sign < 0:
        R = (-R[0], -R[1])
        amb = -amb if amb is not None else None
    det = s[0] * t[1] - s[1] * t[0]
    return LineClass(R, amb, H.square(R), abs(det) == 1, s, t)


# -- partitions ---------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Partition:
    """Multiset of classes summing to v, stored as sorted (part, multiplicity)."""

    parts: tuple[tuple[Vec2, int], ...]

    @classmethod
    def of(cls, vectors: Sequence[Sequence[int]]) -> "Partition":
        counts: dict[Vec2, int] = {}
        for w in vectors:
            w = as_lvec(w)
            counts[w] = counts.get(w, 0) + 1
        return cls(tuple(sorted(counts.items())))

    def flat(self) -> list[Vec2]:
        return [w for w, k in self.parts for _ in range(k)]

    @property
    def total(self) -> Vec2:
        return (sum(w[0] * k for w, k in self.parts), sum(w[1] * k for w, k in self.parts))

    def __len__(self) -> int:
        return sum(k for _, k in self.parts)


def _cone_coords(cone, w) -> tuple[Fraction, Fraction]:
    (a, b), (c, d) = (as_qvec(g) for g in cone)
    det = a * d - b * c
    if det == 0:
        raise LatticeError("cone generators are dependent")
    w = as_qvec(w)
    return ((w[0] * d - w[1] * c) / det, (a * w[1] - b * w[0]) / det)


def enumerate_partitions(H: PointedSublattice, cone) -> list[Partition]:
    """All partitions of v into nonzero classes of the cone with square >= -2."""
    V = _cone_coords(cone, H.v)
    if V[0] < 0 or V[1] < 0:
        raise LatticeError("v lies outside the cone")
    g1, g2 = (as_qvec(g) for g in cone)
    corners = [(0, 0), (V[0] * g1[0], V[0] * g1[1]), (V[1] * g2[0], V[1] * g2[1]), H.v]
    lo = [min(Fraction(c[i]) for c in corners) for i in range(2)]
    hi = [max(Fraction(c[i]) for c in corners) for i in range(2)]
    pieces = []
    for x in range(_ceil(lo[0]), _floor(hi[0]) + 1):
        for y in range(_ceil(lo[1]), _floor(hi[1]) + 1):
            if (x, y) == (0, 0):
                continue
            lam, mu = _cone_coords(cone, (x, y))
            if 0 <= lam <= V[0] and 0 <= mu <= V[1] and H.square((x, y)) >= -2:
                pieces.append((x, y))
    pieces.sort()

    @lru_cache(maxsize=None)
    def split(rest: Vec2, start: int) -> tuple[tuple[Vec2, ...], ...]:
        if rest == (0, 0):
            return ((),)
        out = []
        for i in range(start, len(pieces)):
            p = pieces[i]
            nxt = (rest[0] - p[0], rest[1] - p[1])
            lam, mu = _cone_coords(cone, nxt)
            if lam < 0 or mu < 0:
                continue
            out.extend((p,) + tail for tail in split(nxt, i))
        return tuple(out)

    return sorted({Partition.of(ps) for ps in split(H.v, 0)}, key=lambda P: (len(P), P))


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def refines(finer: Partition, coarser: Partition) -> bool:
    """True if each part of ``coarser`` splits into parts of ``finer``,
    using every part of ``finer`` exactly once."""
    pool = finer.flat()
    targets = coarser.flat()
    if len(pool) < len(targets):
        return False

    def assign(i: int, sums: list[list[int]]) -> bool:
        if i == len(pool):
            return all(tuple(s) == t for s, t in zip(sums, targets))
        p = pool[i]
        tried = set()
        for j, t in enumerate(targets):
            key = (t, tuple(sums[j]))
            if key in tried:
                continue
            tried.add(key)
            sums[j][0] += p[0]
            sums[j][1] += p[1]
            if assign(i + 1, sums):
                return True
            sums[j][0] -= p[0]
            sums[j][1] -= p[1]
        return False

    # empty groups are not allowed: every target must receive something, which
    # holds automatically when parts are nonzero and sums match.
    return assign(0, [[0, 0] for _ in targets])


@dataclass(frozen=True)
class StratumInfo:
    kind: str  # "Plane", "Grassmannian" or "Mixed"
    dim_bound: int | None
    grassmannian: tuple[int, int] | None = None  # (k, ext1) for Gr(k, ext1)
    line_class: LineClass | None = None
    primitive_line: bool | None = None
    multiplicities: tuple[int, int] | None = None
    ext1: int | None = None


def classify_stratum(H: PointedSublattice, P: Partition) -> StratumInfo:
    if P.total != H.v:
        raise LatticeError("partition does not sum to v")
    if len(P.parts) == 2 and all(H.square(w) == -2 for w, _ in P.parts):
        (s, x), (t, y) = P.parts
        e = int(H.pair(s, t))
        dim = x * y * (e - x * y)
        if x == 1 and y == 1:
            try:
                lc = line_class(H)
            except LatticeError:
                lc = None
            return StratumInfo("Plane", dim, (1, e), lc, lc.primitive if lc else None, (x, y), e)
        if x == 1 or y == 1:
            k = max(x, y)
            return StratumInfo("Grassmannian", dim, (k, e), None, None, (x, y), e)
        return StratumInfo("Mixed", dim, None, None, None, (x, y), e)
    return StratumInfo("Mixed", None)
