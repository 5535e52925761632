"""Command-line interface: kernel tables, oracle verification, figures and experiments.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from pathlib import Path

import numpy as np

from hexsum import kernels, radial, suites, summability
from hexsum.exceptions import HexsumError
from hexsum.hexgeom import SQRT3, GridSpec, HexPoint, hex_arrays_from_cartesian

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

KERNEL_HEADER = "x1,x2,t1,t2,t3,value,method,err_est"
FIGURE_HEADER = "x1,x2,t1,t2,t3,value"
CONVERGENCE_HEADER = "R,delta,t1,t2,t3,mean,target,abs_err"
PDCHECK_HEADER = "t1,t2,t3,phi_value"


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Shortest repr that round-trips to the same double."""
    return repr(float(x))


# -- argument types ----------------------------------------------------------------


def grid_arg(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
        raise argparse.ArgumentTypeError(f"grid needs finite lo < hi, got {text!r}")
    if n < 2:
        raise argparse.ArgumentTypeError(f"grid needs n >= 2 points per axis, got {n}")
    return lo, hi, n


def pair_arg(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}") from None
    return a, b


def float_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def points_arg(text: str) -> list[HexPoint]:
    """``t1,t2;t1,t2;...`` in the hexagonal chart (t3 = -t1 - t2)."""
    pts = []
    for item in text.split(";"):
        if item.strip():
            pts.append(HexPoint.from_pair(*pair_arg(item)))
    if not pts:
        raise argparse.ArgumentTypeError("no points given")
    return pts


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hexsum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="evaluate a kernel on a grid or at a point")
    k.add_argument("--type", required=True, choices=("dirichlet", "e", "cesaro"), dest="kernel")
    k.add_argument("--rho", type=positive_float, help="radius for dirichlet and e")
    k.add_argument("--R", type=positive_float, help="radius for cesaro")
    k.add_argument("--delta", type=positive_float, help="order for cesaro")
    where = k.add_mutually_exclusive_group(required=True)
    where.add_argument("--grid", type=grid_arg, help="lo:hi:n applied to both axes")
    where.add_argument("--point", type=pair_arg, help="x1,x2 (or t1,t2 with --system hexplane)")
    k.add_argument("--system", choices=("cartesian", "hexplane"), default="cartesian")
    k.add_argument("--out", type=Path, help="CSV path (default stdout)")

    v = sub.add_parser("verify", help="run closed-form versus oracle checks")
    v.add_argument("--suite", default="all", choices=suites.SUITES + ("all",))
    v.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)
    v.add_argument("--delta", type=positive_float, help="restrict the witness checks of the cesaro suite")

    f = sub.add_parser("figure", help="write a heatmap (PGM), its CSV and a scaling note")
    f.add_argument("--name", required=True, choices=("spider", "spline"))
    f.add_argument("--grid", type=grid_arg, default=(-6.0, 6.0, 301))
    f.add_argument("--out", type=Path, help="output prefix (default: the figure name)")

    e = sub.add_parser("experiment", help="convergence tables and positivity certificates")
    e.add_argument("--name", required=True, choices=("convergence", "pdcheck"))
    e.add_argument("--a", type=positive_float, default=1.0)
    e.add_argument("--delta", type=float, default=2.0)
    e.add_argument("--R", type=float_list, default=[5.0, 10.0, 20.0, 40.0])
    e.add_argument("--method", choices=("riesz", "cesaro"), default="riesz")
    e.add_argument("--points", type=points_arg, default=None, help="t1,t2;t1,t2;... (default: origin)")
    e.add_argument("--atoms", default="1:1", help="u:w,u:w,... for pdcheck")
    e.add_argument("--grid", type=grid_arg, default=(-5.0, 5.0, 101))
    e.add_argument("--tol", type=float, default=1e-3)
    e.add_argument("--out", type=Path, help="CSV path (default stdout)")
    return parser


@contextlib.contextmanager
def _open_out(path: Path | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


# -- commands ----------------------------------------------------------------------


def _point_arrays(system: str, pair: tuple[float, float]):
    u, v = np.array([pair[0]]), np.array([pair[1]])
    if system == "cartesian":
        return (u, v, *hex_arrays_from_cartesian(u, v))
    t3 = -u - v
    return (u - t3) / SQRT3, v.copy(), u, v, t3


def _kernel_values(args, t1, t2, t3):
    if args.kernel in ("dirichlet", "e"):
        if args.rho is None:
            raise UsageError(f"--rho is required for --type {args.kernel}")
        fn = kernels.dirichlet_array if args.kernel == "dirichlet" else kernels.e_kernel_array
        return fn(args.rho, t1, t2, t3)
    if args.R is None or args.delta is None:
        raise UsageError("--R and --delta are required for --type cesaro")
    return kernels.cesaro_kernel_array(args.R, args.delta, t1, t2, t3)


def cmd_kernel(args) -> int:
    if args.grid is not None:
        lo, hi, n = args.grid
        x1, x2, t1, t2, t3 = GridSpec.square(lo, hi, n, args.system).arrays()
    else:
        x1, x2, t1, t2, t3 = _point_arrays(args.system, args.point)
    values, methods, err = _kernel_values(args, t1, t2, t3)
    with _open_out(args.out) as out:
        out.write(KERNEL_HEADER + "\n")
        for row in zip(x1, x2, t1, t2, t3, values, methods, err):
            out.write(",".join([*map(fmt, row[:6]), str(row[6]), fmt(row[7])]) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    def show(check):
        print(check.line(), flush=True)

    results = suites.run_suite(args.suite, seed=args.seed, delta=args.delta, on_check=show)
    failures = sum(not c.passed for c in results)
    print(f"suite={args.suite} checks={len(results)} failures={failures}")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def write_pgm(path: Path, field: np.ndarray) -> tuple[float, float]:
    """Binary P5 graymap, linear min-max scaling; NaN maps to 0.  Returns (min, max)."""
    finite = np.isfinite(field)
    lo = float(field[finite].min()) if finite.any() else 0.0
    hi = float(field[finite].max()) if finite.any() else 0.0
    span = hi - lo
    scaled = np.zeros(field.shape) if span == 0 else (field - lo) / span * 255
    pix = np.where(finite, np.rint(scaled), 0).astype(np.uint8)
    rows, cols = pix.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())
    return lo, hi


def figure_field(name: str, t1, t2, t3):
    if name == "spider":
        return kernels.j_closed_array(t1, t2, t3)
    out = np.full(t1.shape, np.nan)
    for k in range(t1.size):
        a, b, c = t1[k] - t2[k], t2[k] - t3[k], t3[k] - t1[k]
        if a == 0 or b == 0 or c == 0:
            continue  # collapsed knots
        out[k] = kernels.m_spline(1.0, HexPoint(t1[k], t2[k], t3[k]))
    return out


def cmd_figure(args) -> int:
    lo, hi, n = args.grid
    grid = GridSpec.square(lo, hi, n)
    x1, x2, t1, t2, t3 = grid.arrays()
    values = figure_field(args.name, t1, t2, t3)
    prefix = args.out if args.out is not None else Path(args.name)
    csv_path = prefix.with_suffix(".csv")
    with open(csv_path, "w", newline="") as fh:
        fh.write(FIGURE_HEADER + "\n")
        for row in zip(x1, x2, t1, t2, t3, values):
            fh.write(",".join(map(fmt, row)) + "\n")
    # grid rows run from low x2 to high x2; image rows run top to bottom
    field = values.reshape(n, n)[::-1]
    vmin, vmax = write_pgm(prefix.with_suffix(".pgm"), field)
    with open(prefix.with_suffix(".txt"), "w") as fh:
        fh.write(f"figure={args.name}\n")
        fh.write(f"grid={lo!r}:{hi!r}:{n} (x1 left to right, x2 bottom to top)\n")
        fh.write(f"scaling=linear min {vmin!r} -> 0, max {vmax!r} -> 255\n")
        fh.write(f"undefined={int(np.sum(~np.isfinite(values)))} points drawn as 0\n")
    print(f"wrote {prefix.with_suffix('.pgm')}, {csv_path} and {prefix.with_suffix('.txt')}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    if args.name == "convergence":
        points = args.points or [HexPoint.origin()]
        if args.delta < 0 or (args.method == "cesaro" and args.delta == 0):
            raise UsageError("--delta must be >= 0 (> 0 for the cesaro method)")
        rows = summability.convergence_experiment(args.a, args.delta, args.R, points, method=args.method)
        with _open_out(args.out) as out:
            out.write(CONVERGENCE_HEADER + "\n")
            for r in rows:
                vals = (r.R, r.delta, *r.point.as_tuple(), r.mean, r.target, r.abs_err)
                out.write(",".join(map(fmt, vals)) + "\n")
            monotone = []
            for p in points:
                errs = [r.abs_err for r in rows if r.point == p]
                monotone.append(all(b < a for a, b in zip(errs, errs[1:])))
            out.write(
                f"# rows={len(rows)} max_abs_err={fmt(max(r.abs_err for r in rows))} "
                f"monotone_in_R={'yes' if all(monotone) else 'no'}\n"
            )
        return EXIT_OK
    try:
        alpha = radial.DiscreteMeasure.parse(args.atoms)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lo, hi, n = args.grid
    grid = GridSpec.square(lo, hi, n)
    _, _, t1, t2, t3 = grid.arrays()
    values = radial.pd_field(alpha, t1, t2, t3)
    report = radial.pd_certificate(alpha, grid, args.tol)
    with _open_out(args.out) as out:
        out.write(PDCHECK_HEADER + "\n")
        for row in zip(t1, t2, t3, values):
            out.write(",".join(map(fmt, row)) + "\n")
        out.write(
            f"# points={grid.size} skipped={report.skipped} min={fmt(report.minimum)} "
            f"violations={report.violations} tol={fmt(args.tol)}\n"
        )
    return EXIT_OK


COMMANDS = {"kernel": cmd_kernel, "verify": cmd_verify, "figure": cmd_figure, "experiment": cmd_experiment}


VALUE_FLAGS = ("--grid", "--point", "--points", "--R", "--atoms")


def _attach_values(argv: list[str]) -> list[str]:
    # "--grid -15:15:201" would otherwise read the value as an option
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1][1:2].isdigit():
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _attach_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hexsum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HexsumError as exc:
        print(f"hexsum: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, ArithmeticError) as exc:
        print(f"hexsum: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
