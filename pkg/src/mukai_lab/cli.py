"""Command-line interface: JSON in, canonical JSON out.

Exit codes: 0 computed, 1 negative verdict under --strict, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .cones import hilb2_cones, orthogonal_slope, wall_meets_movable
from .lattice import IntLattice, LatticeError, as_fraction, as_qvec, discriminant_group, divisibility, pair
from .monodromy import EICHLER_NOTE, orbit_count_bound, orbit_invariants, same_orbit
from .mukai import HilbPreset, K3Picard, MukaiVector, PointedPeriod, mukai_pairing, theta_dual, to_h_delta_coords
from .planes import fibration_section_search, mori_extremal_generators, numeric_criteria, plane_line_certificate
from .pointed import PointedSublattice
from .quadform import spherical_with_pairing
from .surd import Surd
from .walls import (
    Partition,
    classify_stratum,
    classify_wall,
    decompose_v,
    enumerate_partitions,
    is_p_type,
    line_class,
    refines,
)


class InputError(ValueError):
    pass


# -- serialisation ---------------------------------------------------------------

def jsonable(x: Any) -> Any:
    """Ints stay ints; other rationals become "p/q" strings."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Surd):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in x]
        return sorted(items, key=json.dumps) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "item"):  # numpy scalars
        return jsonable(x.item())
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dumps(obj: dict) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, ensure_ascii=True)


def _table(obj: dict, indent: str = "") -> str:
    lines = []
    for k in sorted(obj):
        v = obj[k]
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.append(_table(v, indent + "  "))
        else:
            lines.append(f"{indent}{k}: {json.dumps(v)}")
    return "\n".join(lines)


# -- input helpers ---------------------------------------------------------------

def _parse_vector(text: str) -> tuple[Fraction, ...]:
    return tuple(as_fraction(t) for t in text.split(",") if t.strip())


def _field(data: dict, key: str, default=None, required=True):
    if key in data:
        return data[key]
    if default is not None or not required:
        return default
    raise InputError(f"missing field '{key}'")


def _gram(data: dict) -> IntLattice:
    g = _field(data, "gram")
    return IntLattice(tuple(tuple(int(as_fraction(x)) for x in row) for row in g))


def _preset(args, data) -> HilbPreset:
    n = args.n if args.n is not None else data.get("n")
    d = args.d if args.d is not None else data.get("d")
    if n is None or d is None:
        raise InputError("a Hilbert-scheme preset needs --n and --d")
    return HilbPreset(int(n), int(d))


def _ivec(x) -> tuple[int, ...]:
    q = as_qvec(x)
    if any(t.denominator != 1 for t in q):
        raise InputError("expected an integral vector")
    return tuple(int(t) for t in q)


def _period(args, data) -> PointedPeriod:
    """Either {"gram", "v"} or a Hilbert preset."""
    if "gram" in data and "v" in data:
        return PointedPeriod(_gram(data), _ivec(data["v"]))
    return _preset(args, data).period


def _pointed(args, data) -> PointedSublattice:
    """{"H": [[..]], "v": [..]} directly, or {"vectors": [...]} inside a period."""
    positive = data.get("positive")
    if "H" in data:
        return PointedSublattice.from_gram(data["H"], _ivec(_field(data, "v", (1, 0))),
                                           positive=as_qvec(positive) if positive else None)
    P = _period(args, data)
    vectors = [_ivec(x) for x in _field(data, "vectors")]
    return PointedSublattice.from_period(P, vectors, positive=as_qvec(positive) if positive else None)


def _h_coords(H: PointedSublattice, w):
    out = {"H": list(w)}
    if H.basis is not None:
        out["ambient"] = list(H.to_ambient(w))
    return out


def _R(args, data, rank: int | None = None):
    if args.R is not None:
        return _parse_vector(args.R)
    return as_qvec(_field(data, "R"))


# -- commands ---------------------------------------------------------------------

def cmd_pair(args, data):
    L = _gram(data)
    return {"value": pair(L, as_qvec(_field(data, "a")), as_qvec(_field(data, "b"))), "verdict": "computed"}


def cmd_disc_group(args, data):
    D = discriminant_group(_gram(data))
    return {"invariant_factors": list(D.invariant_factors), "order": D.order,
            "lift_basis": [list(x) for x in D.lift_basis], "verdict": "computed"}


def cmd_div(args, data):
    res = divisibility(_gram(data), _ivec(_field(data, "a")))
    return {"div": res.div, "primitive": res.primitive, "dual_class": list(res.dual_class.residues),
            "factors": list(res.dual_class.factors), "verdict": "computed"}


def _picard(args, data) -> K3Picard:
    if "ns" in data:
        return K3Picard(IntLattice(tuple(tuple(int(x) for x in r) for r in data["ns"])))
    if args.d is None and "d" not in data:
        raise InputError("mukai-pair needs --d or an 'ns' Gram matrix")
    return K3Picard.rank_one(int(args.d if args.d is not None else data["d"]))


def _mukai(x) -> MukaiVector:
    if isinstance(x, dict):
        return MukaiVector.from_json(x)
    return MukaiVector.from_coords(_ivec(x))


def cmd_mukai_pair(args, data):
    pic = _picard(args, data)
    a, b = _mukai(_field(data, "a")), _mukai(_field(data, "b"))
    return {"value": mukai_pairing(a, b, pic), "verdict": "computed"}


def cmd_preset(args, data):
    pre = _preset(args, data)
    return {"n": pre.n, "d": pre.d, "v": list(pre.v), "v_square": pre.period.v_square,
            "h": list(pre.h_class), "delta": list(pre.delta_class), "h2_gram": [list(r) for r in pre.h2_gram()],
            "verdict": "computed"}


def cmd_theta_dual(args, data):
    P = _period(args, data)
    c = theta_dual(P, _ivec(_field(data, "a")))
    out = {"curve": list(c.coords), "square": c.square, "verdict": "computed"}
    if "gram" not in data:
        out["h_delta"] = list(to_h_delta_coords(_preset(args, data), c))
    return out


def cmd_spherical(args, data):
    H = _pointed(args, data)
    target = int(args.bound if args.bound is not None else _field(data, "target"))
    sols = spherical_with_pairing(H, target)
    return {"classes": [_h_coords(H, w) for w in sols],
            "pairings": [H.pair(w, H.v) for w in sols], "verdict": "computed"}


def cmd_classify_wall(args, data):
    H = _pointed(args, data)
    kind = classify_wall(H)
    return {"matched": sorted(kind.matched), "gram": [list(r) for r in H.gram], "v": list(H.v),
            "witnesses": [{"class": _h_coords(H, w.vector), "condition": w.condition,
                           "square": w.square, "pairing": w.pairing} for w in kind.witnesses],
            "verdict": "NoWallCondition" not in kind.matched}


def cmd_p_type(args, data):
    H = _pointed(args, data)
    res = is_p_type(H)
    wit = []
    if res.witness is not None:
        wit.append({"role": "witness", "class": _h_coords(H, res.witness), "pairing": H.pair(res.witness, H.v)})
    if res.violating is not None:
        wit.append({"role": "violating", "class": _h_coords(H, res.violating), "pairing": H.pair(res.violating, H.v)})
    return {"p_type": res.p_type, "verdict": res.p_type, "witnesses": wit}


def cmd_decompose(args, data):
    H = _pointed(args, data)
    s, t = decompose_v(H)
    return {"s": _h_coords(H, s), "t": _h_coords(H, t), "st": H.pair(s, t), "verdict": "computed",
            "witnesses": [_h_coords(H, s), _h_coords(H, t)]}


def _partition_json(H, P: Partition):
    return [{"class": _h_coords(H, w), "multiplicity": k, "square": H.square(w)} for w, k in P.parts]


def cmd_partitions(args, data):
    H = _pointed(args, data)
    cone = [as_qvec(g) for g in _field(data, "cone")]
    parts = enumerate_partitions(H, cone)
    order = [[i, j] for i, P in enumerate(parts) for j, Q in enumerate(parts) if i != j and refines(P, Q)]
    return {"partitions": [_partition_json(H, P) for P in parts], "count": len(parts),
            "refines": order, "verdict": "computed"}


def _stratum_json(info):
    out = {"kind": info.kind, "dim_bound": info.dim_bound}
    if info.grassmannian:
        out["grassmannian"] = list(info.grassmannian)
    if info.multiplicities:
        out["multiplicities"] = list(info.multiplicities)
        out["ext1"] = info.ext1
    if info.line_class is not None:
        out["line_class"] = list(info.line_class.R)
        out["primitive_line"] = info.primitive_line
    return out


def cmd_stratum(args, data):
    H = _pointed(args, data)
    raw = _field(data, "partition")
    vecs = []
    for item in raw:
        if isinstance(item, dict):
            vecs.extend([_ivec(item["class"])] * int(item.get("multiplicity", 1)))
        else:
            vecs.append(_ivec(item))
    info = classify_stratum(H, Partition.of(vecs))
    return {**_stratum_json(info), "verdict": info.kind}


def cmd_line_class(args, data):
    H = _pointed(args, data)
    side = int(data.get("side", 1))
    ample = data.get("ample")
    lc = line_class(H, side=side, ample=as_qvec(ample) if ample is not None else None)
    out = {"R": list(lc.R), "square": lc.square, "primitive": lc.primitive, "verdict": lc.primitive,
           "witnesses": [_h_coords(H, lc.s), _h_coords(H, lc.t)]}
    if lc.ambient is not None:
        out["ambient"] = list(lc.ambient.coords)
        if H.period is not None and args.d is not None and args.n is not None:
            out["h_delta"] = list(to_h_delta_coords(_preset(args, data), lc.ambient))
    return out


def _plane_inputs(args, data):
    if "gram" in data:
        L = _gram(data)
        n = int(args.n if args.n is not None else _field(data, "n"))
        return n, L, None, _R(args, data)
    pre = _preset(args, data)
    return pre.n, pre.h2_lattice(), pre, _R(args, data)


def cmd_plane_check(args, data):
    n, L, pre, R = _plane_inputs(args, data)
    if len(R) != L.rank:
        raise InputError("R must be given in H^2 coordinates (h, delta for presets)")
    v = numeric_criteria(n, L, R)
    out = {"numeric": "pass" if v.passed else "fail", "reasons": list(v.reasons), "square": v.square,
           "double_integral": v.double_integral, "disc_order": v.disc_order}
    passed = v.passed
    witnesses = []
    if pre is not None:
        cert = plane_line_certificate(pre.period, pre.from_h_delta(*R))
        out["certificate"] = None
        if cert is not None:
            out["certificate"] = {"s": list(cert.s), "sign": cert.sign, "p_type": cert.p_type.p_type}
            witnesses.append(list(cert.s))
        if n == 2:
            meets = wall_meets_movable(pre.d, R)
            out["meets_movable"] = meets
            out["extremal_check"] = "numeric+extremal"
            passed = passed and meets
        else:
            out["meets_movable"] = None
            out["extremal_check"] = "numeric"
    out["verdict"] = passed
    out["witnesses"] = witnesses
    return out


def cmd_certificate(args, data):
    pre = _preset(args, data) if "gram" not in data else None
    P = _period(args, data)
    R = _R(args, data)
    if pre is not None and len(R) == 2:
        R = pre.from_h_delta(*R)
    cert = plane_line_certificate(P, R)
    if cert is None:
        return {"certificate": None, "verdict": False, "witnesses": []}
    H = cert.H
    return {"certificate": {"s": list(cert.s), "sign": cert.sign, "H": [list(r) for r in H.gram],
                            "basis": [list(b) for b in H.basis], "p_type": cert.p_type.p_type},
            "verdict": True, "witnesses": [list(cert.s)]}


def cmd_mori_gens(args, data):
    pre = _preset(args, data)
    box = int(args.box if args.box is not None else data.get("box", 20))
    if "ample" in data:
        ample, tiebreak = pre.from_h_delta(*as_qvec(data["ample"])), None
    else:
        # h, perturbed towards -delta into the ample cone
        ample, tiebreak = pre.h_class, pre.from_h_delta(0, -1)
    scan = mori_extremal_generators(pre.period, ample, box, tiebreak=tiebreak)
    gens = []
    for g in scan.generators:
        if g.curve_square >= 0 and not args.all:
            continue
        gens.append({"a": list(g.a), "curve": list(to_h_delta_coords(pre, g.curve)),
                     "square": g.curve_square, "tags": list(g.tags)})
    return {"generators": gens, "box": scan.box, "requested_box": scan.requested_box,
            "truncated": scan.truncated, "total": len(scan), "verdict": "computed",
            "witnesses": [g["a"] for g in gens]}


def cmd_fibration_section(args, data):
    if "gram" in data:
        L = _gram(data)
        n = int(args.n if args.n is not None else _field(data, "n"))
    else:
        pre = _preset(args, data)
        L, n = pre.h2_lattice(), pre.n
    box = int(args.box if args.box is not None else data.get("box", 5))
    res = fibration_section_search(n, L, box)
    if res is None:
        return {"found": False, "verdict": False, "witnesses": []}
    return {"found": True, "f": list(res.f), "R": list(res.R), "gram": [list(r) for r in res.gram],
            "verdict": True, "witnesses": [list(res.f), list(res.R)]}


def cmd_orbit_invariants(args, data):
    L = _gram(data)
    a = _ivec(_field(data, "a"))
    inv = orbit_invariants(L, a)
    out = {"square": inv.square, "div": inv.div, "dual_class": list(inv.dual_class.residues),
           "factors": list(inv.dual_class.factors), "order": inv.order, "q": inv.q_value,
           "note": EICHLER_NOTE, "verdict": "computed"}
    if "b" in data:
        cmp = same_orbit(L, a, _ivec(data["b"]))
        out.update({"same_orbit": cmp.equal, "direct": cmp.direct, "up_to_sign": cmp.negated,
                    "verdict": cmp.equal})
    return out


def cmd_orbit_bound(args, data):
    n = int(args.n if args.n is not None else _field(data, "n"))
    return {"n": n, "bound": orbit_count_bound(n), "verdict": "computed"}


def _cones_json(d: int) -> dict:
    rep = hilb2_cones(d)
    walls = []
    for w in rep.walls:
        item = {"ray": w.ray.to_json(), "classes": [list(a) for a in w.classes], "kind": sorted(w.kind.matched)}
        if w.line_class is not None:
            item["line_class"] = list(w.line_class)
            item["line_square"] = w.line_square
            item["primitive_line"] = w.primitive_line
        walls.append(item)
    chambers = [{"lower": c.lower.to_json(), "upper": c.upper.to_json(),
                 "wall": sorted(c.wall.kind.matched) if c.wall else None} for c in rep.chambers]
    return {"d": d, "movable": [r.to_json() for r in rep.movable], "nef": [r.to_json() for r in rep.nef],
            "movable_boundary": rep.movable_boundary, "walls": walls, "chambers": chambers,
            "verdict": "computed", "witnesses": [a for w in walls for a in w["classes"]]}


def cmd_hilb2_cones(args, data):
    raw = args.d if args.d is not None else _field(data, "d")
    ds = [int(x) for x in str(raw).split(",")] if not isinstance(raw, list) else [int(x) for x in raw]
    if len(ds) == 1:
        return _cones_json(ds[0])
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            reports = list(ex.map(_cones_json, ds))
    else:
        reports = [_cones_json(d) for d in ds]
    return {"reports": reports, "verdict": "computed"}


def cmd_meets_movable(args, data):
    d = int(args.d if args.d is not None else _field(data, "d"))
    R = _R(args, data)
    meets = wall_meets_movable(d, R)
    return {"meets_movable": meets, "slope": orthogonal_slope(d, R), "verdict": meets, "witnesses": []}


def cmd_gallery(args, data):
    from .gallery import run_gallery

    results = run_gallery(max(1, args.jobs))
    return {"fixtures": {r.name: ("pass" if r.passed else "fail: " + "; ".join(r.mismatches)) for r in results},
            "verdict": all(r.passed for r in results)}


@dataclass(frozen=True)
class Command:
    func: Callable
    needs_input: bool
    help: str


COMMANDS: dict[str, Command] = {
    "pair": Command(cmd_pair, True, "bilinear form value (gram, a, b)"),
    "disc-group": Command(cmd_disc_group, True, "discriminant group L^v/L (gram)"),
    "div": Command(cmd_div, True, "divisibility and dual class (gram, a)"),
    "mukai-pair": Command(cmd_mukai_pair, True, "Mukai pairing (a, b; --d or ns)"),
    "preset": Command(cmd_preset, False, "Hilbert scheme preset (--n, --d)"),
    "theta-dual": Command(cmd_theta_dual, True, "projection onto v^perp (a)"),
    "spherical": Command(cmd_spherical, True, "spherical classes with bounded pairing"),
    "classify-wall": Command(cmd_classify_wall, True, "wall kinds of a pointed sublattice"),
    "p-type": Command(cmd_p_type, True, "P-type test with certificate"),
    "decompose": Command(cmd_decompose, True, "v = s + t for a P-type lattice"),
    "partitions": Command(cmd_partitions, True, "partitions of v in a cone"),
    "stratum": Command(cmd_stratum, True, "stratum type of a partition"),
    "line-class": Command(cmd_line_class, True, "line class of a P-type wall"),
    "plane-check": Command(cmd_plane_check, False, "numeric plane criteria for R"),
    "certificate": Command(cmd_certificate, False, "spherical class lifting R"),
    "mori-gens": Command(cmd_mori_gens, False, "box scan of Mori cone generators"),
    "fibration-section": Command(cmd_fibration_section, False, "search for the fibration-section lattice"),
    "orbit-invariants": Command(cmd_orbit_invariants, True, "Eichler invariants (gram, a[, b])"),
    "orbit-bound": Command(cmd_orbit_bound, False, "bound on the number of orbits"),
    "hilb2-cones": Command(cmd_hilb2_cones, False, "nef and movable cones of X^[2]"),
    "meets-movable": Command(cmd_meets_movable, False, "does R^perp meet the movable cone"),
    "gallery": Command(cmd_gallery, False, "run the worked-example fixtures"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mukai-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, cmd in COMMANDS.items():
        p = sub.add_parser(name, help=cmd.help)
        p.add_argument("--json", dest="json_file", help="input JSON file ('-' for stdin)")
        p.add_argument("--n", type=int)
        p.add_argument("--d", type=str if name == "hilb2-cones" else int)
        p.add_argument("--box", type=int)
        p.add_argument("--bound", type=int)
        p.add_argument("--R", help="comma-separated rational coordinates, e.g. '11,-73/2'")
        p.add_argument("--strict", action="store_true", help="exit 1 on a negative verdict")
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--all", action="store_true", help="mori-gens: include curves of square >= 0")
    return parser


def _read_input(args, cmd: Command, stdin) -> dict:
    if args.json_file:
        if args.json_file == "-":
            text = stdin.read()
        else:
            with open(args.json_file, encoding="utf-8") as fh:
                text = fh.read()
    elif cmd.needs_input:
        text = stdin.read()
    else:
        return {}
    text = text.strip()
    if not text:
        return {}
    data = json.loads(text)
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    return data


def dispatch(argv: list[str] | None = None, stdout=None, stdin=None) -> int:
    stdout = stdout or sys.stdout
    stdin = stdin or sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cmd = COMMANDS[args.command]
    try:
        data = _read_input(args, cmd, stdin)
        out = cmd.func(args, data)
    except (json.JSONDecodeError, InputError, LatticeError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        print(dumps({"error": {"type": type(exc).__name__, "message": str(exc)}, "verdict": "invalid"}), file=stdout)
        return 2
    out.setdefault("witnesses", [])
    text = _table(jsonable(out)) if args.format == "table" else dumps(out)
    print(text, file=stdout)
    if args.strict and out.get("verdict") is False:
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
