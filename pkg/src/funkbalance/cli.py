"""Command-line interface.

Subcommands: check, area, deriv, taylor, balance, scan, field.  Bodies and
fields are JSON files (schemas in the README).  Numeric output is printed
with 17 significant digits so CSV artifacts round-trip exactly and reruns
are byte-identical; errors go to stderr as one structured JSON line with a
nonzero exit status.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__
from .balance import balanced_field, balancing_point, load_field_spec
from .bodies import body_from_dict, load_body, validate
from .errors import (
    BodySpecError,
    ConvergenceError,
    InteriorViolationError,
    RegularityError,
)
from .funkarea import (
    FunkContext,
    area,
    area_derivative,
    cm_coefficient,
    projected_area_function,
    taylor_build,
    taylor_eval,
)
from .quadrature import DEFAULT_RESOLUTION, build_rule


def _fmt(x):
    return format(float(x), ".17g")


def _vector(text):
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}")


def _alpha(text):
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if any(v < 0 for v in values):
        raise argparse.ArgumentTypeError("multi-index entries must be nonnegative")
    return values


def _grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected start:stop:count")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError("expected start:stop:count with numeric fields")
    if count < 1:
        raise argparse.ArgumentTypeError("count must be positive")
    return start, stop, count


def _add_common(sub, margin=True):
    sub.add_argument("body", help="path to a body definition JSON file")
    sub.add_argument("--resolution", type=int, default=None,
                     help="sphere rule resolution (default per dimension)")
    if margin:
        sub.add_argument("--margin", type=float, default=1e-6,
                         help="interior margin for base points (default 1e-6)")
    sub.add_argument("--output", default=None, help="write a machine-readable artifact here")
    sub.add_argument("--format", choices=("csv", "json"), default=None,
                     help="artifact format (default json; csv for scan/field)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="funkbalance",
        description="Funk area functions of convex bodies and their balancing points.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="probe metric regularity over a sphere rule")
    _add_common(p, margin=False)

    p = sub.add_parser("area", help="area function at a base point")
    _add_common(p)
    p.add_argument("--point", type=_vector, required=True, help="base point, comma-separated")
    p.add_argument("--method", choices=("projected", "direct"), default="projected")

    p = sub.add_parser("deriv", help="pure partial derivative of the area function")
    _add_common(p)
    p.add_argument("--point", type=_vector, required=True)
    p.add_argument("--alpha", type=_alpha, required=True,
                   help="derivative multi-index, comma-separated")

    p = sub.add_parser("taylor", help="series expansion of the area function")
    _add_common(p)
    p.add_argument("--center", type=_vector, required=True)
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--eval", type=_vector, default=None, dest="eval_point",
                   help="also evaluate the series at this point")

    p = sub.add_parser("balance", help="locate the balancing point")
    _add_common(p)
    p.add_argument("--tol", type=float, default=1e-9, help="gradient-norm tolerance")
    p.add_argument("--max-iter", type=int, default=100)

    p = sub.add_parser("scan", help="tabulate the area function along an axis")
    _add_common(p)
    p.add_argument("--grid", type=_grid, required=True, help="start:stop:count")
    p.add_argument("--axis", type=int, default=None,
                   help="1-based coordinate axis to scan along (default: last)")
    p.add_argument("--method", choices=("projected", "direct"), default="projected")

    p = sub.add_parser("field", help="balance a sampled family of bodies")
    p.add_argument("field", help="path to a field definition JSON file")
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--margin", type=float, default=1e-6)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--output", default=None)
    p.add_argument("--format", choices=("csv", "json"), default=None)
    return parser


def _rule_for(dimension, resolution):
    if resolution is None:
        resolution = DEFAULT_RESOLUTION[dimension]
    return build_rule(dimension, resolution)


def _emit(args, rows, header, payload):
    """Write the machine-readable artifact if requested."""
    if args.output is None:
        return
    fmt = args.format or "json"
    if fmt == "csv":
        with open(args.output, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            writer.writerows(rows)
    else:
        with open(args.output, "w") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write("\n")


def _write_csv(stream, header, rows):
    writer = csv.writer(stream)
    writer.writerow(header)
    writer.writerows(rows)


def _cmd_check(args):
    body = load_body(args.body)
    rule = _rule_for(body.dimension, args.resolution)
    report = validate(body, rule)
    print(f"kind: {body.kind}  dimension: {body.dimension}  rule: {rule.descriptor}")
    print(f"min metric eigenvalue: {_fmt(report.min_metric_eigenvalue)}")
    print(f"worst node: {','.join(_fmt(x) for x in report.worst_node)}")
    print(f"strongly convex: {report.is_strongly_convex}")
    print(f"margin: {_fmt(report.margin)}")
    payload = {
        "min_metric_eigenvalue": report.min_metric_eigenvalue,
        "worst_node": report.worst_node.tolist(),
        "is_strongly_convex": report.is_strongly_convex,
        "margin": report.margin,
    }
    _emit(args, [], [], payload)
    return 0


def _cmd_area(args):
    body = load_body(args.body)
    rule = _rule_for(body.dimension, args.resolution)
    ctx = FunkContext(body, args.point, margin=args.margin)
    value = area(ctx, rule, method=args.method)
    print(_fmt(value))
    _emit(args, [[*(_fmt(x) for x in ctx.point), _fmt(value)]],
          [*(f"p{i + 1}" for i in range(body.dimension)), "area"],
          {"point": ctx.point.tolist(), "method": args.method, "area": value})
    return 0


def _cmd_deriv(args):
    body = load_body(args.body)
    rule = _rule_for(body.dimension, args.resolution)
    ctx = FunkContext(body, args.point, margin=args.margin)
    value = area_derivative(ctx, rule, args.alpha)
    order = sum(args.alpha)
    coefficient = cm_coefficient(body.dimension, order)
    print(f"alpha: {','.join(str(a) for a in args.alpha)}  order: {order}")
    print(f"c_m: {_fmt(coefficient)}")
    print(f"derivative: {_fmt(value)}")
    _emit(args, [[*map(str, args.alpha), _fmt(coefficient), _fmt(value)]],
          [*(f"alpha{i + 1}" for i in range(body.dimension)), "c_m", "derivative"],
          {"alpha": list(args.alpha), "c_m": coefficient, "derivative": value})
    return 0


def _cmd_taylor(args):
    body = load_body(args.body)
    rule = _rule_for(body.dimension, args.resolution)
    model = taylor_build(body, args.center, args.order, rule, margin=args.margin)
    rows = []
    print(f"center: {','.join(_fmt(x) for x in model.center)}  order: {model.order}")
    for alpha, coeff in model.coefficients.items():
        print(f"  {','.join(str(a) for a in alpha)}: {_fmt(coeff)}")
        rows.append([*map(str, alpha), _fmt(coeff)])
    payload = {
        "center": model.center.tolist(),
        "order": model.order,
        "coefficients": {",".join(map(str, a)): c for a, c in model.coefficients.items()},
    }
    if args.eval_point is not None:
        value = taylor_eval(model, args.eval_point)
        print(f"value at {','.join(_fmt(x) for x in args.eval_point)}: {_fmt(value)}")
        payload["eval_point"] = list(args.eval_point)
        payload["value"] = value
    _emit(args, rows,
          [*(f"alpha{i + 1}" for i in range(body.dimension)), "coefficient"], payload)
    return 0


def _cmd_balance(args):
    body = load_body(args.body)
    rule = _rule_for(body.dimension, args.resolution)
    result = balancing_point(body, rule, tol=args.tol, max_iter=args.max_iter,
                             margin=args.margin)
    from .funkarea import area_hessian

    hess = area_hessian(FunkContext(body, result.point, margin=args.margin), rule)
    spectrum = np.linalg.eigvalsh(hess)
    print(f"point: {','.join(_fmt(x) for x in result.point)}")
    print(f"iterations: {result.iterations}  converged: {result.converged}")
    print(f"grad norm: {_fmt(result.grad_norm)}  beta norm: {_fmt(result.beta_norm)}")
    print(f"hessian spectrum: {','.join(_fmt(x) for x in spectrum)}")
    payload = {
        "point": result.point.tolist(),
        "iterations": result.iterations,
        "converged": result.converged,
        "grad_norm": result.grad_norm,
        "beta_norm": result.beta_norm,
        "hessian_spectrum": spectrum.tolist(),
    }
    _emit(args, [[*(_fmt(x) for x in result.point), _fmt(result.beta_norm)]],
          [*(f"p{i + 1}" for i in range(body.dimension)), "beta_norm"], payload)
    if not result.converged:
        raise ConvergenceError(
            f"no convergence in {result.iterations} iterations "
            f"(grad norm {result.grad_norm:.3e})"
        )
    return 0


def _cmd_scan(args):
    body = load_body(args.body)
    rule = _rule_for(body.dimension, args.resolution)
    start, stop, count = args.grid
    axis = body.dimension if args.axis is None else args.axis
    if not 1 <= axis <= body.dimension:
        raise BodySpecError(f"axis must be between 1 and {body.dimension}")
    values = np.linspace(start, stop, count)
    header = [*(f"p{i + 1}" for i in range(body.dimension)), "area"]
    rows = []
    area_at = projected_area_function(body, rule) if args.method == "projected" else None
    for s in values:
        point = np.zeros(body.dimension)
        point[axis - 1] = s
        if area_at is not None:
            gauge = float(body.minkowski(point)) if s else 0.0
            if gauge > 1.0 - args.margin:
                raise InteriorViolationError(
                    f"scan point with gauge {gauge:.6g} is not interior"
                )
            value = area_at(point)
        else:
            value = area(FunkContext(body, point, margin=args.margin), rule, "direct")
        rows.append([*(_fmt(x) for x in point), _fmt(value)])
    if args.output is None or (args.format or "csv") != "csv":
        _write_csv(sys.stdout, header, rows)
    payload = {"rows": [[float(x) for x in row] for row in rows], "header": header}
    args.format = args.format or "csv"
    _emit(args, rows, header, payload)
    return 0


def _cmd_field(args):
    spec = load_field_spec(args.field)
    probe = dict(spec["body_template"])
    dimension = int(probe.get("dimension", len(spec["grid"])))
    rule = _rule_for(dimension, args.resolution)
    sample, _ = balanced_field(spec, rule, tol=args.tol, margin=args.margin)
    n_grid = sample.points.shape[1]
    n_out = sample.vectors.shape[1]
    header = [
        *(f"q{i + 1}" for i in range(n_grid)),
        *(f"V{i + 1}" for i in range(n_out)),
        "residual",
    ]
    rows = [
        [*(_fmt(x) for x in sample.points[i]),
         *(_fmt(x) for x in sample.vectors[i]),
         _fmt(sample.residuals[i])]
        for i in range(sample.points.shape[0])
    ]
    if args.output is None or (args.format or "csv") != "csv":
        _write_csv(sys.stdout, header, rows)
    args.format = args.format or "csv"
    _emit(args, rows, header, {"header": header,
                               "rows": [[float(x) for x in row] for row in rows]})
    if not bool(np.all(sample.converged)):
        failures = int(np.count_nonzero(~sample.converged))
        raise ConvergenceError(f"{failures} grid point(s) failed to balance")
    return 0


_HANDLERS = {
    "check": _cmd_check,
    "area": _cmd_area,
    "deriv": _cmd_deriv,
    "taylor": _cmd_taylor,
    "balance": _cmd_balance,
    "scan": _cmd_scan,
    "field": _cmd_field,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (BodySpecError, InteriorViolationError, RegularityError, ConvergenceError,
            ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
