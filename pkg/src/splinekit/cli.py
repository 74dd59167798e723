"""Command-line entry point: ``splinekit <command> ...``.

Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 numerical
failure.  Diagnostics go to stderr; results go to stdout as ``key=value``
lines.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from .errors import FormatError, NumericalError, SplineError
from .iga import export_solution, solve_poisson, unit_box
from .io import SplineFile, convert, file_format, read_any, write_vtk
from .optimize import DEFAULT_BOUNDS, PAPER_BOUNDS, run_parabola_demo

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _resolution(text: str) -> tuple[int, ...]:
    try:
        res = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not 1 <= len(res) <= 3:
        raise argparse.ArgumentTypeError(f"expected 1 to 3 resolution entries, got {len(res)}")
    if any(r < 2 for r in res):
        raise argparse.ArgumentTypeError(f"resolution entries must be at least 2, got {text}")
    return res


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _sample_count(text: str) -> int:
    value = _positive_int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"expected at least 2 samples, got {value}")
    return value


def _check_resolution_dims(sf: SplineFile, res: Sequence[int]) -> None:
    for i, spline in enumerate(sf.splines):
        if len(res) != spline.dim:
            raise UsageError(
                f"resolution has {len(res)} entries but spline {i} has {spline.dim} parametric directions"
            )


def _emit(**values) -> None:
    for key, value in values.items():
        print(f"{key}={value}")


def cmd_convert(args) -> int:
    if file_format(args.output) == "vtk":
        if args.resolution is None:
            raise UsageError("VTK output needs --resolution")
        _check_resolution_dims(read_any(args.input), args.resolution)
    summary = convert(args.input, args.output, args.resolution)
    for w in summary.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(input_format=summary.input_format, output_format=summary.output_format, splines=summary.spline_count)
    return EXIT_OK


def cmd_sample(args) -> int:
    if file_format(args.output) != "vtk":
        raise UsageError(f"sample writes VTK; output {args.output!r} does not end in .vtk")
    sf = read_any(args.input)
    _check_resolution_dims(sf, args.resolution)
    write_vtk(sf, [args.resolution] * len(sf), args.output)
    _emit(splines=len(sf), points_per_spline=_product(args.resolution))
    return EXIT_OK


def _product(values: Sequence[int]) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def cmd_iga_cube(args) -> int:
    # control points per direction = elements + degree; two of them lie on the boundary
    if args.elements + args.degree < 3:
        raise UsageError(
            f"{args.elements} element(s) of degree {args.degree} leave no interior control point; "
            "use more elements or a higher degree"
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    geometry = unit_box(3, args.degree, args.elements)
    field = solve_poisson(geometry)
    res = [args.resolution] * 3
    export_solution(field, res, out / "solution.vtk")
    for d, axis in enumerate("xyz"):
        export_solution(field, res, out / f"slice_{axis}.vtk", slice_at=(d, 0.5))
    _emit(
        elements=args.elements,
        degree=args.degree,
        control_points=geometry.n_control_points,
        center_value=repr(field.at([0.5, 0.5, 0.5])),
    )
    return EXIT_OK


def cmd_optimize_parabola(args) -> int:
    bounds = PAPER_BOUNDS if args.paper_bounds else DEFAULT_BOUNDS
    trace = run_parabola_demo(args.out, bounds=bounds, tol=args.tol)
    result = trace.result
    if not result.converged:
        print("warning: evaluation budget exhausted before the tolerance was met", file=sys.stderr)
    _emit(
        lower_bound=repr(bounds[0]),
        upper_bound=repr(bounds[1]),
        y=repr(result.x),
        objective=repr(result.value),
        evaluations=result.evaluations,
        converged=str(result.converged).lower(),
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="splinekit", description="B-spline/NURBS kernel tools")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("convert", help="convert between itd, xml, igs/iges and vtk (output only)")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--resolution", type=_resolution, help="samples per direction for VTK, e.g. 50,50")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("sample", help="sample splines to a VTK file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--resolution", type=_resolution, required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("iga-cube", help="solve -laplace(u) = 1 on the unit cube")
    p.add_argument("--elements", type=_positive_int, default=8)
    p.add_argument("--degree", type=int, choices=(1, 2, 3), default=2)
    p.add_argument("--resolution", type=_sample_count, default=17, help="samples per direction in the VTK output")
    p.add_argument("--out", default="iga_cube")
    p.set_defaults(func=cmd_iga_cube)

    p = sub.add_parser("optimize-parabola", help="fit a quadratic curve to y = 1 - x^2")
    p.add_argument("--out", default="optimize_parabola")
    p.add_argument("--paper-bounds", action="store_true", help="restrict y to [-1, 1]")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_optimize_parabola)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(f"splinekit: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"splinekit: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (FormatError, OSError) as exc:
        print(f"splinekit: {exc}", file=sys.stderr)
        return EXIT_IO
    except SplineError as exc:
        print(f"splinekit: invalid input: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
