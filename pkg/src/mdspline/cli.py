"""Command-line front end.

Subcommands: validate, sample, insert-knot, elevate, to-bezier,
to-conventional, dump-transitions, serve.  Exit codes: 0 success,
2 document/validation error, 3 operator precondition error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .basis import build_basis
from .curve import OperatorError, elevate_degree, insert_knot, to_bezier, to_conventional
from .documents import (
    DocumentError,
    bezier_to_document,
    curve_from_document,
    curve_to_document,
    load_document,
    save_document,
    space_from_document,
    transitions_to_document,
)
from .space import InvalidSpaceError, extended_partitions

EXIT_VALIDATION = 2
EXIT_OPERATOR = 3
EXIT_IO = 4


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_table(headers, rows, out, fmt):
    if fmt == "json":
        payload = {"headers": headers, "rows": [[float(v) for v in r] for r in rows]}
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [",".join(headers)]
        lines += [",".join(_fmt(v) for v in r) for r in rows]
        text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    space = space_from_document(load_document(args.document))
    parts = extended_partitions(space)
    print(f"valid multi-degree spline space, dimension K={space.dimension}")
    print(f"domain: [{_fmt(space.domain[0])}, {_fmt(space.domain[1])}]")
    print(f"degrees: {space.degrees.tolist()}")
    for i, (x, k) in enumerate(zip(space.breakpoints, space.continuities), start=1):
        conn = space.connection_at(i)
        tag = " (connection matrix)" if conn is not None else ""
        print(f"break-point x_{i}={_fmt(x)}: C^{k}{tag}")
    print(f"start knots: {[float(v) for v in parts.starts]}")
    print(f"end knots:   {[float(v) for v in parts.ends]}")
    return 0


def cmd_sample(args) -> int:
    doc = load_document(args.document)
    n = args.samples
    if n < 2:
        raise OperatorError("need at least 2 samples")
    if args.what == "curve" or "control_points" in doc:
        curve = curve_from_document(doc)
        space, basis, ts = curve.space, curve.basis, curve.transitions
    else:
        space = space_from_document(doc)
        ts, basis = build_basis(space)
        curve = None
    xs = np.linspace(space.domain[0], space.domain[1], n)
    if args.what == "basis":
        data = basis.sample(xs)
        headers = ["x"] + [f"N{i + 1}" for i in range(space.dimension)]
    elif args.what == "transitions":
        data = ts.sample(xs)
        headers = ["x"] + [f"f{i + 1}" for i in range(space.dimension)]
    elif args.what == "curve":
        if curve is None:
            raise DocumentError("curve sampling needs control_points")
        data = curve.sample(xs)
        headers = ["x"] + [f"c{ax}" for ax in "xyz"[: data.shape[1]]]
    elif args.what == "derivative":
        data = basis.sample_derivative(xs, args.order)
        headers = ["x"] + [f"D{args.order}N{i + 1}" for i in range(space.dimension)]
    else:
        raise DocumentError(f"unknown sampling target {args.what!r}")
    rows = np.column_stack([xs, data])
    _write_table(headers, rows, args.out, args.format)
    return 0


def _apply_and_save(args, fn) -> int:
    curve = curve_from_document(load_document(args.document))
    new_curve = fn(curve)
    doc = curve_to_document(new_curve)
    if args.out:
        save_document(doc, args.out)
    else:
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def cmd_insert(args) -> int:
    return _apply_and_save(args, lambda c: insert_knot(c, args.x))


def cmd_elevate(args) -> int:
    return _apply_and_save(args, lambda c: elevate_degree(c, args.interval, args.times))


def cmd_to_conventional(args) -> int:
    return _apply_and_save(args, to_conventional)


def cmd_to_bezier(args) -> int:
    curve = curve_from_document(load_document(args.document))
    doc = bezier_to_document(to_bezier(curve))
    if args.out:
        save_document(doc, args.out)
    else:
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def cmd_dump_transitions(args) -> int:
    space = space_from_document(load_document(args.document))
    ts, _ = build_basis(space)
    doc = transitions_to_document(ts)
    if args.out:
        save_document(doc, args.out)
    else:
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(ui_dir=args.ui, check_invariance=not args.no_invariance_check)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdspline", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    p = add("validate", cmd_validate, help="validate a space/curve document")
    p.add_argument("document")

    p = add("sample", cmd_sample, help="sample basis/transitions/curve/derivative to CSV or JSON")
    p.add_argument("document")
    p.add_argument("--what", default="basis", choices=["basis", "transitions", "curve", "derivative"])
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--order", type=int, default=1, help="derivative order for --what derivative")
    p.add_argument("--out")
    p.add_argument("--format", default="csv", choices=["csv", "json"])

    p = add("insert-knot", cmd_insert, help="insert one knot into a curve document")
    p.add_argument("document")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--out")

    p = add("elevate", cmd_elevate, help="raise the degree of one break interval")
    p.add_argument("document")
    p.add_argument("--interval", type=int, required=True)
    p.add_argument("--times", type=int, default=1)
    p.add_argument("--out")

    p = add("to-bezier", cmd_to_bezier, help="extract per-interval Bezier control polygons")
    p.add_argument("document")
    p.add_argument("--out")

    p = add("to-conventional", cmd_to_conventional, help="convert to a uniform-degree spline")
    p.add_argument("document")
    p.add_argument("--out")

    p = add("dump-transitions", cmd_dump_transitions, help="dump transition coefficient tables")
    p.add_argument("document")
    p.add_argument("--out")

    p = add("serve", cmd_serve, help="run the JSON session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--ui", default=None, help="directory of editor assets to mount at /ui")
    p.add_argument("--no-invariance-check", action="store_true")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (DocumentError, InvalidSpaceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OperatorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPERATOR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
