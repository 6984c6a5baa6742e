"""Command-line interface.

Exit codes: 0 pass, 1 a check failed, 2 usage error, 3 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from . import applications as A
from . import bounds as B
from . import extremal as E
from . import verify as V
from .caratheodory import EPS_ANGLE, TiltAngle
from .errors import InvalidTilt, NonConvergence, TiltcaraError
from .series import DEFAULT_ORDER

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3

BOUND_COLUMNS = [
    ("r", "radius |z|"),
    ("coeff", "|p_n| <= 2cos(lambda)"),
    ("deriv", "|p'(z)| <= 2cos(lambda)/(1-r)^2"),
    ("disc_center_re", "Re of disc center (1 + r^2 e^{-2i lambda})/(1-r^2)"),
    ("disc_center_im", "Im of disc center (1 + r^2 e^{-2i lambda})/(1-r^2)"),
    ("disc_radius", "|p(z) - center| <= 2r cos(lambda)/(1-r^2)"),
    ("A", "|p(z)| <= A(lambda, r)"),
    ("inv_A", "|p(z)| >= 1/A(lambda, r)"),
    ("re_lo", "Re p(z) >= (1 + r^2 cos 2lambda - 2r cos lambda)/(1-r^2)"),
    ("re_hi", "Re p(z) <= (1 + r^2 cos 2lambda + 2r cos lambda)/(1-r^2)"),
    ("M", "|z p'(z)/p(z)| <= M(lambda, r)"),
    ("N", "min over |z|=r of |z k'(z)/k(z)| for the kernel k, N(lambda, r)"),
]


def jsonable(obj):
    """Convert numbers, tuples and complex values into plain JSON types."""
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return jsonable(obj.item())
    return obj


@dataclass
class ReportRecord:
    command: str
    parameters: dict
    outputs: dict
    passed: bool
    wall_time: float = 0.0
    failures: list = field(default_factory=list)

    def __post_init__(self):
        self.parameters = jsonable(self.parameters)
        self.outputs = jsonable(self.outputs)
        self.failures = jsonable(self.failures)

    def to_json(self) -> str:
        return json.dumps(jsonable(asdict(self)), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportRecord":
        return cls(**json.loads(text))

    def write(self, path: str):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_json())


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def bound_row(lam: float, r: float) -> dict:
    """One row of the bounds table, straight from the library."""
    tilt = TiltAngle(lam)
    center, radius = B.containment_disc(tilt, r)
    a = B.growth_A(tilt, r)
    lo, hi = B.re_bounds(tilt, r)
    return {
        "r": r,
        "coeff": B.coeff_bound(tilt),
        "deriv": B.deriv_bound(tilt, r),
        "disc_center_re": center.real,
        "disc_center_im": center.imag,
        "disc_radius": radius,
        "A": a,
        "inv_A": 1.0 / a,
        "re_lo": lo,
        "re_hi": hi,
        "M": B.logderiv_M(tilt, r),
        "N": B.logderiv_N(tilt, r),
    }


def _csv(rows: list[dict], columns: Sequence[tuple[str, str]], preamble: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in preamble:
        buf.write(f"# {line}\n")
    for name, formula in columns:
        buf.write(f"# {name}: {formula}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([c for c, _ in columns])
    for row in rows:
        w.writerow([fmt(row[c]) for c, _ in columns])
    return buf.getvalue()


def _json(payload: dict) -> str:
    return json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n"


def cmd_bounds(lam: float, radii: Sequence[float], format: str = "csv") -> str:
    rows = [bound_row(lam, r) for r in radii]
    if format == "json":
        cols = [{"name": c, "formula": f} for c, f in BOUND_COLUMNS]
        return _json({"command": "bounds", "lambda": lam, "columns": cols, "rows": rows})
    return _csv(rows, BOUND_COLUMNS, [f"bounds lambda={fmt(lam)}"])


def cmd_scan(bound_name: str, lam: float, r: float, k: int = E.DEFAULT_K, order: int = DEFAULT_ORDER):
    rep = E.sharpness_certificate(bound_name, lam, r, k=k, order=order)
    x, z = rep.witness
    row = {
        "name": rep.name,
        "lambda": lam,
        "r": r,
        "bound": rep.bound,
        "achieved": rep.achieved,
        "gap": rep.gap,
        "witness_x": x,
        "witness_z": z,
        **{k_: v for k_, v in rep.extras.items()},
    }
    return rep, row


SCAN_COLUMNS = [
    ("name", "registered bound"),
    ("lambda", "tilt"),
    ("r", "radius |z|"),
    ("bound", "closed-form value"),
    ("achieved", "refined extremal scan value"),
    ("gap", "bound - achieved (achieved - bound for lower bounds)"),
    ("witness_x_re", "Re x of the attaining kernel rotation"),
    ("witness_x_im", "Im x"),
    ("witness_z_re", "Re z of the attaining point"),
    ("witness_z_im", "Im z"),
    ("alpha", "argument of x z (log-derivative bound only)"),
    ("alpha_error", "distance of alpha to the predicted attaining angle"),
]


def _scan_output(row: dict, format: str) -> str:
    if format == "json":
        return _json({"command": "scan", **row})
    flat = dict(row)
    flat["witness_x_re"], flat["witness_x_im"] = row["witness_x"].real, row["witness_x"].imag
    flat["witness_z_re"], flat["witness_z_im"] = row["witness_z"].real, row["witness_z"].imag
    flat.setdefault("alpha", math.nan)
    flat.setdefault("alpha_error", math.nan)
    buf = io.StringIO()
    for name, formula in SCAN_COLUMNS:
        buf.write(f"# {name}: {formula}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([c for c, _ in SCAN_COLUMNS])
    w.writerow([flat["name"]] + [fmt(flat[c]) for c, _ in SCAN_COLUMNS[1:]])
    return buf.getvalue()


RADIUS_COLUMNS = [
    ("lambda", "tilt"),
    ("r_star", "radius where the spirallike condition stops holding for Robertson functions"),
    ("width", "half-width of the certified bracket"),
    ("lo", "largest radius where the predicate was seen to hold"),
    ("hi", "smallest radius where it was seen to fail (1 when it never fails)"),
    ("touches_one", "predicate held next to r = 1"),
    ("iterations", "bisection steps"),
    ("samples", "circle samples evaluated"),
]


def cmd_radius(lams: Sequence[float], tol: float) -> list[dict]:
    rows = []
    for lam in lams:
        res = A.robertson_radius(lam, tol)
        rows.append({"lambda": lam, **asdict(res)})
    return rows


def run_verify(lams: Sequence[float], seeds: int, base_seed: int, order: int):
    results = V.run_suite(lams, seeds, base_seed, order)
    failures = [r.to_dict() for r in results if not r.passed]
    return results, failures


# -- argument parsing ---------------------------------------------------------


def _tilt_arg(text: str) -> float:
    try:
        lam = float(text)
        TiltAngle(lam)
    except (ValueError, InvalidTilt):
        raise argparse.ArgumentTypeError(f"lambda must be a float in (-pi/2, pi/2), |lambda| <= pi/2 - {EPS_ANGLE:g}")
    return lam


def _radius_arg(text: str) -> float:
    try:
        r = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid radius {text!r}")
    if not 0.0 <= r < 1.0:
        raise argparse.ArgumentTypeError("radius must lie in [0, 1)")
    return r


def _tol_arg(text: str) -> float:
    tol = float(text)
    if not tol >= 1e-6:
        raise argparse.ArgumentTypeError("tol must be at least 1e-6")
    return tol


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tiltcara", description="Sharp bounds for the tilted Caratheodory class.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, lam_many=False, r_many=False, r_default=None):
        if lam_many:
            p.add_argument("--lambda", dest="lam", type=_tilt_arg, nargs="+", default=list(V.DEFAULT_LAMBDAS))
        else:
            p.add_argument("--lambda", dest="lam", type=_tilt_arg, required=True)
        if r_many:
            p.add_argument("--r", dest="r", type=_radius_arg, nargs="+", default=r_default)
        p.add_argument("--order", type=int, default=DEFAULT_ORDER)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", metavar="PATH", default=None)

    p = sub.add_parser("bounds", help="table of closed-form bounds")
    common(p, r_many=True, r_default=[0.5])

    p = sub.add_parser("verify", help="run the property suites")
    common(p, lam_many=True)
    p.add_argument("--seeds", type=int, default=20)

    p = sub.add_parser("radius", help="radius of spirallikeness for Robertson functions")
    common(p, lam_many=True)
    p.add_argument("--tol", type=_tol_arg, default=A.ROBERTSON_TOL)

    p = sub.add_parser("scan", help="sharpness certificate for one bound")
    p.add_argument("bound_name", metavar="BOUND", help=", ".join(E.BOUND_REGISTRY))
    common(p)
    p.add_argument("--r", dest="r", type=_radius_arg, default=0.5)
    p.add_argument("--k", type=int, default=E.DEFAULT_K, help="lattice size")
    return parser


def _params(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("out", "command")}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.order < 2:
        parser.error("--order must be at least 2")
    t0 = time.perf_counter()
    out = sys.stdout
    try:
        if args.command == "bounds":
            text = cmd_bounds(args.lam, args.r, args.format)
            out.write(text)
            record = ReportRecord("bounds", _params(args), {"rows": [bound_row(args.lam, r) for r in args.r]}, True)
            code = EXIT_OK

        elif args.command == "scan":
            if args.bound_name not in E.BOUND_REGISTRY:
                parser.print_usage(sys.stderr)
                sys.stderr.write(f"tiltcara: error: unknown bound {args.bound_name!r}; "
                                 f"choose from {', '.join(E.BOUND_REGISTRY)}\n")
                return EXIT_USAGE
            rep, row = cmd_scan(args.bound_name, args.lam, args.r, args.k, args.order)
            out.write(_scan_output(row, args.format))
            ok = -V.TOL <= rep.gap <= V.GAP_TOL
            record = ReportRecord("scan", _params(args), row, ok)
            code = EXIT_OK if ok else EXIT_FAIL

        elif args.command == "radius":
            try:
                rows = cmd_radius(args.lam, args.tol)
            except NonConvergence as exc:
                sys.stderr.write(f"tiltcara: bisection did not converge: {exc}\n")
                return EXIT_NONCONVERGENCE
            if args.format == "json":
                out.write(_json({"command": "radius", "tol": args.tol, "rows": rows}))
            else:
                out.write(_csv(rows, RADIUS_COLUMNS, [f"radius tol={fmt(args.tol)}"]))
            record = ReportRecord("radius", _params(args), {"rows": rows}, True)
            code = EXIT_OK

        else:  # verify
            results, failures = run_verify(args.lam, args.seeds, args.seed, args.order)
            passed = not failures
            summary = {
                "checks": len(results),
                "failed": len(failures),
                "results": [r.to_dict() for r in results],
            }
            if args.format == "json":
                out.write(_json({"command": "verify", "passed": passed, **summary}))
            else:
                for r in results:
                    out.write(f"{'PASS' if r.passed else 'FAIL'} {r.name} lambda={fmt(r.lam)}\n")
                out.write(f"# {len(results) - len(failures)}/{len(results)} checks passed\n")
            for f in failures:
                sys.stderr.write("FAILED " + json.dumps(jsonable(f), sort_keys=True) + "\n")
            record = ReportRecord("verify", _params(args), summary, passed, failures=failures)
            code = EXIT_OK if passed else EXIT_FAIL
    except TiltcaraError as exc:
        sys.stderr.write(f"tiltcara: error: {exc}\n")
        return EXIT_USAGE

    record.wall_time = time.perf_counter() - t0
    if args.out:
        record.write(args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
