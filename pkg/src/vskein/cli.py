"""Command-line interface.

Exit codes: 0 success, 1 a residual is nonzero, 2 bad input (parse error,
unknown fixture, unsuitable crossing), 3 crossing cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import codec
from .codec import CodecError, catalog, emit_json, to_jsonable
from .instances import random_instances
from .invariant import (
    CrossingCapError,
    PreconditionError,
    enumerate_states,
    verify_skein_classical,
    verify_skein_main,
    verify_skein_virtual_cc,
    x_polynomial,
)
from .model import ClassicalCrossing, Diagram, DiagramError, components, skein_triples, writhe
from .numbering import (
    canonical_cut_system,
    is_almost_classical_diagram,
    is_checkerboard_colorable,
    solve_numbering,
)
from .poly import MultiPoly

EXIT_OK, EXIT_RESIDUAL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def load_diagram(args) -> Diagram:
    try:
        if args.pd:
            return codec.parse_pd(Path(args.pd).read_text())
        if args.gauss:
            return codec.realize_gauss(codec.parse_gauss(Path(args.gauss).read_text()))
        if args.braid:
            return codec.parse_braid(args.braid)
        return catalog(args.catalog)
    except (CodecError, OSError, KeyError) as exc:
        raise InputError(str(exc)) from exc


def summary(d: Diagram, cap, workers) -> dict:
    x = x_polynomial(d, cap=cap, workers=workers)
    return {
        "X": x,
        "f": x.substitute_d_one(),
        "writhe": writhe(d),
        "components": components(d),
        "classical_crossings": len(d.classical),
        "virtual_crossings": len(d.virtual),
        "almost_classical": is_almost_classical_diagram(d),
        "checkerboard_colorable": is_checkerboard_colorable(d),
    }


def cmd_invariant(args) -> tuple[dict, int]:
    d = load_diagram(args)
    return summary(d, args.cap, args.workers), EXIT_OK


def cmd_skein(args) -> tuple[dict, int]:
    d = load_diagram(args)
    try:
        c = d.crossing(args.crossing)
    except DiagramError as exc:
        raise InputError(str(exc)) from exc
    if not isinstance(c, ClassicalCrossing):
        raise InputError(f"crossing {args.crossing} is virtual")
    if c.sign < 0:
        raise InputError(f"crossing {args.crossing} is negative; select a positive crossing")
    t = skein_triples(d, c.id)
    out: dict = {
        "crossing": c.id,
        "diagrams": {
            name: {"pd": codec.emit_pd(x), **summary(x, args.cap, args.workers)}
            for name, x in (("D+", t.plus), ("D-", t.minus), ("D0", t.zero), ("Dv", t.virtual))
        },
        "relations": {},
    }
    status = EXIT_OK
    for name, fn in (("classical", verify_skein_classical), ("checkerboard", verify_skein_virtual_cc),
                     ("main", verify_skein_main)):
        try:
            report = fn(d, c.id, cap=args.cap)
        except PreconditionError as exc:
            out["relations"][name] = {"gated": f"precondition unmet: {exc}"}
            continue
        out["relations"][name] = report
        if not report.ok:
            status = EXIT_RESIDUAL
    return out, status


def cmd_numbering(args) -> tuple[dict, int]:
    d = load_diagram(args)
    try:
        cuts = canonical_cut_system(d, around_virtual=args.around_virtual)
    except DiagramError as exc:
        raise InputError(str(exc)) from exc
    return {
        "without_cuts": solve_numbering(d, None, args.modulus),
        "cut_system": cuts,
        "cut_points": [p._asdict() for p in cuts.points(d)],
        "numbering": solve_numbering(d, cuts, args.modulus),
    }, EXIT_OK


def cmd_random(args) -> tuple[dict, int]:
    items = random_instances(args.seed, args.count, max_crossings=args.max_crossings,
                             virtual_rate=args.virtual_rate, virtualize_extra=args.virtualize)
    return {"seed": args.seed, "instances": items}, EXIT_OK


def render_text(obj, indent: int = 0) -> str:
    """Indented ``key: value`` view of the JSON form, polynomials in math notation."""
    obj = to_jsonable(obj)
    pad = "  " * indent
    if isinstance(obj, dict) and set(obj) == {"poly"}:
        return str(MultiPoly.from_json(obj))
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            nested = isinstance(v, dict) and v and set(v) != {"poly"} or (
                isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v)
            )
            if nested:
                lines.append(f"{pad}{k}:\n{render_text(v, indent + 1)}")
            else:
                lines.append(f"{pad}{k}: {render_text(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return str(obj)
        return "\n".join(f"{pad}-\n{render_text(v, indent + 1)}" for v in obj)
    return str(obj)


def build_parser() -> argparse.ArgumentParser:
    source = argparse.ArgumentParser(add_help=False)
    src = source.add_mutually_exclusive_group(required=True)
    src.add_argument("--pd", metavar="FILE", help="virtual PD code file")
    src.add_argument("--gauss", metavar="FILE", help="signed Gauss code file")
    src.add_argument("--braid", metavar="WORD", help='braid word, e.g. "s=2: s1 s1 s1"')
    src.add_argument("--catalog", metavar="NAME", help="built-in fixture: " + ", ".join(codec.CATALOG_NAMES))
    source.add_argument("--cap", type=int, default=None, help="classical crossing cap (default 26)")
    source.add_argument("--workers", type=int, default=1, help="processes for the state sum")

    fmt = argparse.ArgumentParser(add_help=False)
    out = fmt.add_mutually_exclusive_group()
    out.add_argument("--json", dest="fmt", action="store_const", const="json")
    out.add_argument("--text", dest="fmt", action="store_const", const="text")
    fmt.set_defaults(fmt="text")

    p = argparse.ArgumentParser(prog="vskein", description="Multivariable polynomial of virtual links and skein checks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariant", parents=[source, fmt], help="X, f, writhe and diagram flags")
    s.set_defaults(func=cmd_invariant)

    s = sub.add_parser("skein", parents=[source, fmt], help="verify the skein relations at one crossing")
    s.add_argument("--crossing", type=int, required=True)
    s.set_defaults(func=cmd_skein)

    s = sub.add_parser("numbering", parents=[source, fmt], help="Alexander numbering and canonical cut system")
    s.add_argument("--modulus", type=int, default=0)
    s.add_argument("--around-virtual", type=int, default=None, metavar="VID",
                   help="place two cut points around virtual crossing VID")
    s.set_defaults(func=cmd_numbering)

    s = sub.add_parser("state-table", parents=[source, fmt], help="one line per cut point state")
    s.set_defaults(func=None)

    s = sub.add_parser("random", parents=[fmt], help="seeded random braid instances")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--max-crossings", type=int, default=12)
    s.add_argument("--virtual-rate", type=float, default=0.0)
    s.add_argument("--virtualize", action="store_true", help="also virtualize a random subset of crossings")
    s.set_defaults(func=cmd_random)
    return p


def _state_table(args) -> int:
    d = load_diagram(args)
    for state in enumerate_states(d, cap=args.cap):
        print(emit_json(state) if args.fmt == "json" else state.line())
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "state-table":
            return _state_table(args)
        result, status = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CrossingCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    print(emit_json(result) if args.fmt == "json" else render_text(result))
    return status


if __name__ == "__main__":
    sys.exit(main())
