"""Command-line front end.

Exit codes: 0 success, 1 domain-level negative result, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import gcd
from typing import Any, Dict, List, Optional, Sequence

import jsonschema

from . import bounds as bd
from .doubled import TransversalityViolation, doubled_b0_line, sign_table
from .mixed import (AffinePairLift, coinciding_keys, lower_hull_oracle, matches_oracle,
                    mixed_subdivision, mixedness)
from .patchwork import (NonPrimitiveCell, PatchworkComplex, SignDistribution, SignMismatch,
                        ambient_complex, double_plane_b0, harnack_signs, hypersurface_complex,
                        region_complex)
from .triangulation import (ConvexTriangulation, DegenerateCellError, PointConfiguration,
                            _threads, convexity_violation, primitive_triangulation)

OK, NEGATIVE, MALFORMED = 0, 1, 2


class Malformed(Exception):
    pass


RATIONAL = {"oneOf": [{"type": "integer"},
                      {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}]}
POINTS = {"type": "array", "minItems": 1,
          "items": {"type": "array", "items": {"type": "integer"}}}
TRIANGULATION = {
    "type": "object",
    "required": ["points", "cells"],
    "properties": {
        "kind": {"const": "triangulation"},
        "points": POINTS,
        "cells": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "lift": {"type": "array", "items": RATIONAL},
    },
}
SCHEMAS: Dict[str, dict] = {
    "triangulation": TRIANGULATION,
    "signs": {
        "type": "object",
        "required": ["triangulation", "signs"],
        "properties": {
            "triangulation": TRIANGULATION,
            "signs": {"type": "array", "items": {"enum": [1, -1]}},
        },
    },
    "complex": {
        "type": "object",
        "required": ["n", "m", "complex_kind", "cells"],
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "m": {"type": "integer", "minimum": 1},
            "complex_kind": {"enum": ["hypersurface", "ambient", "region", "region-affine"]},
            "cells": {"type": "array", "items": {"type": "array", "items": POINTS}},
        },
    },
    "lift-pair": {
        "type": "object",
        "required": ["k", "n", "a", "b"],
        "properties": {"k": {"type": "integer", "minimum": 1}, "n": {"type": "integer", "minimum": 1},
                       "a": {"type": "array", "items": RATIONAL},
                       "b": {"type": "array", "items": RATIONAL}},
    },
    "doubled-line": {
        "type": "object",
        "required": ["roots_k", "roots_2k", "lead_sign"],
        "properties": {"roots_k": {"type": "array", "items": RATIONAL},
                       "roots_2k": {"type": "array", "items": RATIONAL},
                       "lead_sign": {"enum": [1, -1]}},
    },
    "bounds-request": {
        "type": "object",
        "properties": {"max_n": {"type": "integer", "minimum": 1},
                       "seeds": {"type": "array", "items": RATIONAL, "minItems": 2, "maxItems": 2}},
    },
}


# ---------------------------------------------------------------------------
# parsing and formatting
# ---------------------------------------------------------------------------

def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool):
        raise Malformed(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise Malformed(f"not a rational: {value!r}")
    text = value.strip()
    try:
        if "/" in text:
            p, q = text.split("/")
            p, q = int(p), int(q)
            if q <= 0 or gcd(p, q) != 1:
                raise Malformed(f"rational {value!r} must be p/q with q > 0 and gcd(p, q) = 1")
            return Fraction(p, q)
        return Fraction(int(text))
    except ValueError:
        raise Malformed(f"not a rational: {value!r}") from None


def parse_rational_list(text: str) -> List[Fraction]:
    text = text.strip()
    if not text:
        return []
    return [parse_rational(x) for x in text.split(",")]


def fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def approx(q: Fraction) -> str:
    return f"~{float(q):.4g}"


def fmt_tuple(values: Sequence) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


def load_document(path: str, kinds: Sequence[str]) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise Malformed(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise Malformed(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict) or doc.get("kind") not in kinds:
        raise Malformed(f"{path}: expected a document of kind {' or '.join(kinds)}")
    try:
        jsonschema.validate(doc, SCHEMAS[doc["kind"]])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "document"
        raise Malformed(f"{path}: {where}: {exc.message}") from None
    return doc


def triangulation_from(doc: Dict[str, Any]) -> ConvexTriangulation:
    points = [tuple(p) for p in doc["points"]]
    if len({len(p) for p in points}) != 1:
        raise Malformed("points have different lengths")
    try:
        config = PointConfiguration(tuple(points))
    except ValueError as exc:
        raise Malformed(str(exc)) from None
    cells = []
    for c in doc["cells"]:
        if any(i >= len(points) for i in c):
            raise Malformed(f"cell {c} refers to a missing point")
        cells.append(tuple(sorted(c)))
    lift = None
    if "lift" in doc:
        if len(doc["lift"]) != len(points):
            raise Malformed("lift must have one value per point")
        lift = tuple(parse_rational(x) for x in doc["lift"])
    return ConvexTriangulation(config, tuple(sorted(cells)), lift)


def triangulation_document(tau: ConvexTriangulation) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"kind": "triangulation",
                           "points": [list(p) for p in tau.config.points],
                           "cells": [list(c) for c in tau.cells]}
    if tau.lift is not None:
        doc["lift"] = [fmt(x) for x in tau.lift]
    return doc


def complex_document(cx: PatchworkComplex) -> Dict[str, Any]:
    return {"kind": "complex", "n": cx.n, "m": cx.m, "complex_kind": cx.kind,
            "coordinates": "doubled",
            "cells": [[[list(p) for p in c] for c in level] for level in cx.cells]}


def dump(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_certify(args, out) -> int:
    tau = triangulation_from(load_document(args.path, ["triangulation"]))
    if tau.lift is None:
        raise Malformed("certification needs a lift")
    try:
        v = convexity_violation(tau)
    except DegenerateCellError as exc:
        out.write(f"DEGENERATE CELL: {exc}\n")
        return NEGATIVE
    if v is None:
        out.write(f"certified convex: {len(tau.cells)} cells, lift induces exactly these cells\n")
        return OK
    if v.cell < 0:
        out.write(f"NOT CONVEX: {v.reason}\n")
    else:
        cell = [list(tau.config.points[i]) for i in tau.cells[v.cell]]
        point = list(tau.config.points[v.point])
        out.write(f"NOT CONVEX: cell {v.cell} {cell}: point {point}: {v.reason}\n")
    return NEGATIVE


def _region_report(tau, signs, out) -> None:
    for choice, label in ((1, "+"), (-1, "-")):
        reg = region_complex(tau, signs, choice)
        flags = ", ".join("closed" if f else "bounded" for f in reg.closed_flags)
        line = f"region {label}: components = {reg.component_count} [{flags}]"
        if choice > 0 and reg.complex.m % 2 == 0:
            line += f", double plane b0 = {double_plane_b0(reg)}"
        out.write(line + "\n")


def cmd_patchwork(args, out) -> int:
    doc = load_document(args.path, ["signs", "complex"])
    if doc["kind"] == "complex":
        cx = PatchworkComplex.from_cells(doc["n"], doc["m"], doc["complex_kind"],
                                         [[[tuple(p) for p in c] for c in lvl] for lvl in doc["cells"]])
        out.write(f"b = {fmt_tuple(cx.betti())}\n")
        return OK
    tri_doc = dict(doc["triangulation"], kind="triangulation")
    tau = triangulation_from(tri_doc)
    if len(doc["signs"]) != len(tau.config.points):
        raise Malformed("one sign per configuration point is required")
    signs = SignDistribution.of(tau.config.points, doc["signs"])
    try:
        cx = hypersurface_complex(tau, signs)
    except NonPrimitiveCell as exc:
        out.write(f"NOT PRIMITIVE: {exc}\n")
        return NEGATIVE
    except (SignMismatch, ValueError) as exc:
        raise Malformed(str(exc)) from None
    if args.betti or not (args.regions or args.export_complex):
        out.write(f"b = {fmt_tuple(cx.betti())}\n")
    if args.regions:
        _region_report(tau, signs, out)
    if args.export_complex:
        text = dump(complex_document(cx))
        if args.export_complex == "-":
            out.write(text)
        else:
            with open(args.export_complex, "w", encoding="utf-8") as fh:
                fh.write(text)
    return OK


def cmd_ambient(args, out) -> int:
    if args.path:
        tau = triangulation_from(load_document(args.path, ["triangulation"]))
    else:
        if args.n is None or args.m is None:
            raise Malformed("ambient needs a triangulation file or both --n and --m")
        if args.n < 1 or args.m < 1:
            raise Malformed("--n and --m must be positive")
        tau = primitive_triangulation(args.m, args.n)
    try:
        cx = ambient_complex(tau)
    except ValueError as exc:
        raise Malformed(str(exc)) from None
    out.write(f"b = {fmt_tuple(cx.betti())}\n")
    out.write(f"euler characteristic = {cx.euler_characteristic()}\n")
    return OK


def cmd_mixed(args, out) -> int:
    a, b = parse_rational_list(args.a), parse_rational_list(args.b)
    try:
        lift = AffinePairLift(args.k, args.n, tuple(a), tuple(b))
    except ValueError as exc:
        raise Malformed(str(exc)) from None
    keys = lift.keys()
    out.write("keys 2a_i - b_i = " + fmt_tuple(fmt(x) for x in keys) + "\n")
    sigma = mixedness(lift)
    status = OK
    if sigma is None:
        groups = "; ".join(f"indices {fmt_tuple(g)} share {fmt(keys[g[0]])}" for g in coinciding_keys(lift))
        out.write(f"NOT MIXED: {groups}\n")
        status = NEGATIVE
    else:
        sub = mixed_subdivision(lift)
        out.write(f"sigma = {fmt_tuple(sigma)}\n")
        for l, (us, vs) in enumerate(sub.cells):
            verts = " ".join(fmt_tuple(v) for v in sub.cell_vertices(l))
            out.write(f"F_{l} = conv{{{', '.join(f'u_{i}' for i in us)}}} + "
                      f"conv{{{', '.join(f'v_{i}' for i in vs)}}}: {verts}\n")
    if args.verify:
        oracle = lower_hull_oracle(lift)
        if sigma is None:
            agree = not oracle.is_mixed()
        else:
            agree = matches_oracle(mixed_subdivision(lift), oracle)
        if agree:
            out.write("oracle match" + (" (oracle is not mixed either)" if sigma is None else "") + "\n")
        else:
            out.write("ORACLE MISMATCH\n")
        if not agree:
            status = NEGATIVE
    return status


def cmd_doubled_line(args, out) -> int:
    rk, r2 = parse_rational_list(args.roots_k), parse_rational_list(args.roots_2k)
    try:
        table = sign_table(rk, r2, args.lead_sign)
    except TransversalityViolation as exc:
        out.write(f"transversality violated: {exc}\n")
        return NEGATIVE
    except ValueError as exc:
        raise Malformed(str(exc)) from None
    for r, s in table:
        out.write(f"root {fmt(r)}: f_2k sign {'+' if s > 0 else '-'}\n")
    out.write(f"b0 = {doubled_b0_line(rk, r2, args.lead_sign)}\n")
    return OK


def _parse_gap_range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise Malformed(f"--t-gap expects a..b, got {text!r}") from None
    if lo < 4 or hi < lo:
        raise Malformed("--t-gap range must satisfy 4 <= a <= b")
    return range(lo, hi + 1)


def cmd_bounds(args, out) -> int:
    seeds = bd.Seeds()
    max_n = args.max_n
    if args.request:
        doc = load_document(args.request, ["bounds-request"])
        max_n = doc.get("max_n", max_n)
        if "seeds" in doc and not args.seeds:
            args.seeds = ",".join(str(x) for x in doc["seeds"])
    if max_n < 1:
        raise Malformed("--max-n must be positive")
    if args.seeds:
        vals = parse_rational_list(args.seeds)
        if len(vals) != 2 or any(v < 0 for v in vals):
            raise Malformed("--seeds expects two nonnegative rationals delta_02,delta_12")
        seeds = bd.Seeds(delta02=vals[0])
        z03, z13 = bd.surface_bounds(*vals)
        out.write(f"seeds: delta_02 >= {fmt(vals[0])}, delta_12 >= {fmt(vals[1])}\n")
        out.write(f"zeta_03 >= {fmt(z03)} ({approx(z03)})\n")
        out.write(f"zeta_13 >= {fmt(z13)} ({approx(z13)})\n")
    status = OK
    if args.table or not (args.seeds or args.t_gap):
        out.write("n | zeta_0n lower | zeta_0n upper | delta_0n lower | delta_0n upper\n")
        for row in bd.table1(max_n, seeds):
            cells = [f"{fmt(x)} ({approx(x)})" for x in row.entries()]
            out.write(f"{row.n} | " + " | ".join(cells) + "\n")
    if args.t_gap:
        for n in _parse_gap_range(args.t_gap):
            g = bd.t_gap_check(n, seeds)
            verdict = "gap holds" if g.holds else "gap fails"
            rel = ">" if g.holds else "<="
            out.write(f"n = {n}: {verdict} ({fmt(g.lower)} {rel} {fmt(g.t_bound)})\n")
            if not g.holds:
                status = NEGATIVE
    return status


def cmd_harnack(args, out) -> int:
    if args.m < 2 or args.m % 2:
        raise Malformed("--m must be an even integer >= 2")
    tau = primitive_triangulation(args.m, 2)
    signs = harnack_signs(args.m)
    lookup = dict(zip(signs.points, signs.signs))
    tri = triangulation_document(tau)
    del tri["kind"]
    doc = {"kind": "signs", "triangulation": tri, "signs": [lookup[p] for p in tau.config.points]}
    text = dump(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="viropatch", description="Exact combinatorial patchworking toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="check that a triangulation's lift induces its cells")
    c.add_argument("path")
    c.set_defaults(func=cmd_certify)

    c = sub.add_parser("patchwork", help="patchwork a sign distribution on a primitive triangulation")
    c.add_argument("path")
    c.add_argument("--betti", action="store_true")
    c.add_argument("--regions", action="store_true")
    c.add_argument("--export-complex", metavar="OUT", help="write the complex as JSON ('-' for stdout)")
    c.set_defaults(func=cmd_patchwork)

    c = sub.add_parser("ambient", help="Betti numbers of the glued ambient space")
    c.add_argument("path", nargs="?")
    c.add_argument("--n", type=int)
    c.add_argument("--m", type=int)
    c.set_defaults(func=cmd_ambient)

    c = sub.add_parser("mixed", help="mixed subdivision induced by a pair of affine lifts")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--a", required=True, help="comma-separated rationals a_0..a_n")
    c.add_argument("--b", required=True, help="comma-separated rationals b_0..b_n")
    c.add_argument("--verify", action="store_true", help="compare with the brute-force lower hull")
    c.set_defaults(func=cmd_mixed)

    c = sub.add_parser("doubled-line", help="b_0 of the one-dimensional doubled model")
    c.add_argument("--roots-k", required=True)
    c.add_argument("--roots-2k", required=True)
    c.add_argument("--lead-sign", type=int, choices=(1, -1), required=True)
    c.set_defaults(func=cmd_doubled_line)

    c = sub.add_parser("bounds", help="exact bounds on the Betti coefficients")
    c.add_argument("request", nargs="?", help="optional bounds-request document")
    c.add_argument("--table", action="store_true")
    c.add_argument("--max-n", type=int, default=7)
    c.add_argument("--seeds", help="delta_02,delta_12 lower bounds")
    c.add_argument("--t-gap", metavar="A..B")
    c.set_defaults(func=cmd_bounds)

    c = sub.add_parser("harnack", help="emit the Harnack sign fixture for even degree m")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_harnack)
    return p


VALUE_LISTS = ("--a", "--b", "--roots-k", "--roots-2k", "--seeds")


def _attach_list_values(argv: Sequence[str]) -> List[str]:
    """Turn "--a -1,2" into "--a=-1,2" so argparse does not read -1,2 as an option."""
    out: List[str] = []
    it = iter(argv)
    for tok in it:
        if tok in VALUE_LISTS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _attach_list_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return MALFORMED if exc.code else OK
    try:
        _threads()
        return args.func(args, out)
    except Malformed as exc:
        sys.stderr.write(f"error: {exc}\n")
        return MALFORMED
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return MALFORMED


if __name__ == "__main__":
    sys.exit(main())
