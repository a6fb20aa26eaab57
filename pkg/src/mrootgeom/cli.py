"""Command-line front end.

Subcommands: ``expand`` (canonical polynomial form of a metric), ``eval``
(geometry tensors at a batch of points), ``check`` (full invariant suite and
erratum adjudication), ``report`` (single-point geometry dossier).

Exit codes: 0 success, 1 domain failure, 2 invariant failure, 3 usage or
input error.  All output is JSON (``--pretty`` for an indented variant) and
byte-deterministic for a fixed input and seed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .curvature import curvature_bundle, einstein_residual, nonlinear_connection
from .errors import (
    DegenerateDomain,
    DegenerateForms,
    DimensionMismatch,
    MrootGeomError,
    NotApplicableDimension,
    SingularMetric,
)
from .kernels import BACKEND
from .metric import as_direction, derivative_tensor, domain_status
from .power import geometry_point
from .serialize import (
    BUILTIN_TAGS,
    as_polynomial,
    dumps,
    make_builtin,
    metric_from_dict,
    metric_to_dict,
    tensor_to_dict,
)
from .verify import run_check

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INVARIANT = 2
EXIT_USAGE = 3

OUTPUT_NAMES = ("L", "g", "g_inv", "C", "C_mixed", "S_mixed", "S_cov", "ricci", "scalar", "einstein")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse defaults to exit code 2; the contract reserves 2 for
        # invariant failures and 3 for usage errors.
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_metric(spec: str):
    """Resolve --metric: a builtin tag or a path to a metric JSON file."""
    if spec in BUILTIN_TAGS:
        return make_builtin(spec)
    try:
        with open(spec, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise _UsageError(f"cannot read metric file {spec!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _UsageError(f"malformed metric JSON in {spec!r}: {exc}") from exc
    try:
        return metric_from_dict(obj)
    except DegenerateForms:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise _UsageError(f"invalid metric definition: {exc}") from exc


def _load_points(path: str, n: int) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise _UsageError(f"cannot read points file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _UsageError(f"malformed points JSON in {path!r}: {exc}") from exc
    if isinstance(obj, dict):
        obj = obj.get("points")
    if not isinstance(obj, list) or not obj:
        raise _UsageError("points file must hold a nonempty JSON array of points")
    try:
        pts = [as_direction(p, n) for p in obj]
    except (DimensionMismatch, TypeError, ValueError) as exc:
        raise _UsageError(f"invalid point: {exc}") from exc
    return np.array(pts)


def _parse_point(text: str, n: int) -> np.ndarray:
    try:
        return as_direction([float(v) for v in text.split(",")], n)
    except (DimensionMismatch, ValueError) as exc:
        raise _UsageError(f"invalid --point {text!r}: {exc}") from exc


def _status_dict(status) -> dict:
    return {
        "a_value": status.a_value,
        "classification": status.classification.value,
        "detail": status.detail,
    }


def _emit(payload, pretty: bool) -> None:
    print(dumps(payload, pretty=pretty))


def cmd_expand(args) -> int:
    metric = as_polynomial(_load_metric(args.metric))
    _emit(metric_to_dict(metric), args.pretty)
    return EXIT_OK


def _point_outputs(metric, y, outputs, kappa):
    status = domain_status(metric, y)
    entry: dict = {"y": [float(v) for v in y], "status": _status_dict(status)}
    if not status.is_regular:
        return entry, False
    try:
        pt = geometry_point(metric, y)
    except (DegenerateDomain, SingularMetric) as exc:
        # a bad point is recorded, never fatal for the rest of the batch
        entry["status"]["detail"] += f"; {exc}"
        entry["error"] = str(exc)
        return entry, False
    need_curvature = any(o in outputs for o in ("S_mixed", "S_cov", "ricci", "scalar", "einstein"))
    curv = curvature_bundle(pt) if need_curvature else None
    for name in outputs:
        if name == "L":
            entry["L"] = pt.l_value
        elif name == "g":
            entry["g"] = tensor_to_dict(pt.g)
        elif name == "g_inv":
            entry["g_inv"] = tensor_to_dict(pt.g_inv)
        elif name == "C":
            entry["C"] = tensor_to_dict(pt.c_cov)
        elif name == "C_mixed":
            entry["C_mixed"] = tensor_to_dict(pt.c_mixed)
        elif name == "S_mixed":
            entry["S_mixed"] = tensor_to_dict(curv.s_mixed)
        elif name == "S_cov":
            entry["S_cov"] = tensor_to_dict(curv.s_cov)
        elif name == "ricci":
            entry["ricci"] = tensor_to_dict(curv.ricci)
        elif name == "scalar":
            entry["scalar"] = curv.scalar
        elif name == "einstein":
            er = einstein_residual(curv.ricci, curv.scalar, pt.g, kappa, pt.g_inv)
            entry["einstein"] = {
                "tensor": tensor_to_dict(er.einstein),
                "kappa": er.kappa,
                "stress_energy": tensor_to_dict(er.stress_energy),
                "trace_residual": er.trace_residual,
            }
    entry["cond"] = pt.cond
    return entry, True


def cmd_eval(args) -> int:
    metric = as_polynomial(_load_metric(args.metric))
    outputs = tuple(s.strip() for s in args.outputs.split(",") if s.strip())
    unknown = [o for o in outputs if o not in OUTPUT_NAMES]
    if unknown:
        raise _UsageError(f"unknown outputs {unknown}; choose from {', '.join(OUTPUT_NAMES)}")
    if not outputs:
        raise _UsageError("at least one output must be requested")
    if ("einstein" in outputs) != (args.kappa is not None):
        raise _UsageError("--kappa is required exactly when the einstein output is requested")
    if args.kappa == 0.0:
        raise _UsageError("--kappa must be nonzero")
    points = _load_points(args.points, metric.n)
    entries, any_regular = [], False
    for y in points:
        entry, regular = _point_outputs(metric, y, outputs, args.kappa)
        entries.append(entry)
        any_regular = any_regular or regular
    payload = {
        "metric": metric_to_dict(metric),
        "outputs": list(outputs),
        "points": entries,
    }
    _emit(payload, args.pretty)
    return EXIT_OK if any_regular else EXIT_DOMAIN


def cmd_check(args) -> int:
    tags = tuple(s.strip() for s in args.metric.split(",") if s.strip())
    try:
        report = run_check(
            metrics=tags, count=args.count, seed=args.seed, inject_errata=args.inject_errata
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    _emit(report.to_dict(), args.pretty)
    return EXIT_OK if report.overall_pass else EXIT_INVARIANT


def cmd_report(args) -> int:
    metric = as_polynomial(_load_metric(args.metric))
    y = _parse_point(args.point, metric.n)
    status = domain_status(metric, y)
    if not status.is_regular:
        payload = {"y": [float(v) for v in y], "status": _status_dict(status)}
        _emit(payload, args.pretty)
        return EXIT_DOMAIN
    pt = geometry_point(metric, y)
    curv = curvature_bundle(pt)
    conn = nonlinear_connection(metric, y)
    hessian = derivative_tensor(metric, y, 2)
    eigvals = np.linalg.eigvalsh(pt.g)
    payload = {
        "metric": metric_to_dict(metric),
        "y": [float(v) for v in y],
        "status": _status_dict(status),
        "kernel_backend": BACKEND,
        "L": pt.l_value,
        "polynomial_value": status.a_value,
        "hessian_determinant": float(np.linalg.det(hessian)),
        "g": tensor_to_dict(pt.g),
        "g_inv": tensor_to_dict(pt.g_inv),
        "g_condition": pt.cond,
        "g_signature": [int(np.sign(v)) for v in eigvals],
        "g_eigenvalues": [float(v) for v in eigvals],
        "C": tensor_to_dict(pt.c_cov),
        "C_mixed": tensor_to_dict(pt.c_mixed),
        "torsion_gradient": tensor_to_dict(pt.c_grad),
        "S_mixed": tensor_to_dict(curv.s_mixed),
        "S_cov": tensor_to_dict(curv.s_cov),
        "ricci": tensor_to_dict(curv.ricci),
        "scalar_curvature": curv.scalar,
        "einstein": tensor_to_dict(curv.einstein),
        "spray": tensor_to_dict(conn.spray),
        "connection": tensor_to_dict(conn.connection),
    }
    if args.kappa is not None:
        if args.kappa == 0.0:
            raise _UsageError("--kappa must be nonzero")
        er = einstein_residual(curv.ricci, curv.scalar, pt.g, args.kappa, pt.g_inv)
        payload["kappa"] = er.kappa
        payload["stress_energy"] = tensor_to_dict(er.stress_energy)
        payload["einstein_trace_residual"] = er.trace_residual
    _emit(payload, args.pretty)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="mrootgeom", description=__doc__)
    parser.add_argument("--version", action="version", version=f"mrootgeom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="emit the canonical polynomial form of a metric")
    p.add_argument("--metric", required=True, help="builtin tag (bg3, bg4) or metric JSON path")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="compact JSON output (default)")
    fmt.add_argument("--pretty", action="store_true", help="indented JSON output")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("eval", help="evaluate geometry tensors at a batch of points")
    p.add_argument("--metric", required=True)
    p.add_argument("--points", required=True, help="JSON file with an array of points")
    p.add_argument("--outputs", default="L", help=f"comma list from: {', '.join(OUTPUT_NAMES)}")
    p.add_argument("--kappa", type=float, default=None, help="Einstein constant")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="compact JSON output (default)")
    fmt.add_argument("--pretty", action="store_true", help="indented JSON output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check", help="run the invariant suite and erratum adjudication")
    p.add_argument("--metric", default="bg3,bg4", help="comma list of builtin tags")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200, help="regular points per metric")
    p.add_argument(
        "--inject-errata",
        action="store_true",
        help="run the known-erroneous printed formulas as if correct (the suite must fail)",
    )
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="compact JSON output (default)")
    fmt.add_argument("--pretty", action="store_true", help="indented JSON output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("report", help="full geometry dossier at one point")
    p.add_argument("--metric", required=True)
    p.add_argument("--point", required=True, help="comma-separated components, e.g. 3,1,1")
    p.add_argument("--kappa", type=float, default=None)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="compact JSON output (default)")
    fmt.add_argument("--pretty", action="store_true", help="indented JSON output")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateDomain, SingularMetric) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (DegenerateForms, DimensionMismatch, NotApplicableDimension) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MrootGeomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    raise SystemExit(main())
