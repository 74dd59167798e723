"""Shape-optimization demo: fit a quadratic curve to the parabola y = 1 - x^2.

The curve has control points (-1, 0), (0, y), (1, 0) over the knot vector
{0, 0, 0, 1, 1, 1}; the middle ordinate ``y`` is the only design variable.
The objective is the area enclosed between curve and parabola, minimized by
a deterministic golden-section search that also samples both bounds.
"""

from __future__ import annotations

import logging
import math
import os
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate, optimize

from .errors import SplineError
from .io.model import SplineFile
from .io.vtk import write_vtk
from .spline import BSpline

log = logging.getLogger(__name__)

KNOTS = (0.0, 0.0, 0.0, 1.0, 1.0, 1.0)
DEFAULT_BOUNDS = (-1.0, 3.0)
PAPER_BOUNDS = (-1.0, 1.0)
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def target(x):
    return 1.0 - np.square(x)


def design_curve(y: float) -> BSpline:
    return BSpline([KNOTS], [2], [(-1.0, 0.0), (0.0, float(y)), (1.0, 0.0)])


def objective_area(y: float, tol: float = 1e-8) -> float:
    """Area between the design curve and the target parabola over x in [-1, 1].

    x(u) is affine for this control polygon, so the integral is taken in the
    curve parameter u with dx = x'(u) du.  Sign changes of the gap are located
    first and handed to the adaptive quadrature as break points.
    """
    if not math.isfinite(y):
        raise SplineError(f"design variable must be finite, got {y!r}")
    curve = design_curve(y)

    def gap(u: float) -> float:
        x, yc = curve.evaluate([u])
        return float(yc - target(x))

    def integrand(u: float) -> float:
        dx = curve.evaluate_derivative([u], [1], [0])[0]
        return abs(gap(u)) * abs(dx)

    grid = np.linspace(0.0, 1.0, 65)
    values = [gap(u) for u in grid]
    breaks = [
        optimize.brentq(gap, a, b, xtol=1e-14)
        for a, b, fa, fb in zip(grid[:-1], grid[1:], values[:-1], values[1:])
        if fa * fb < 0.0
    ]
    area, _ = integrate.quad(integrand, 0.0, 1.0, points=breaks or None, epsabs=tol, epsrel=0.0, limit=200)
    return float(area)


@dataclass
class Evaluation:
    iteration: int
    x: float
    value: float
    path: str | None = None


@dataclass
class MinimizeResult:
    x: float
    value: float
    evaluations: int
    converged: bool
    trace: list[Evaluation] = field(default_factory=list)


def minimize_bounded(
    objective: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-6,
    max_evals: int = 100,
    callback: Callable[[Evaluation], None] | None = None,
) -> MinimizeResult:
    """Golden-section search on ``[lo, hi]`` for a unimodal objective.

    Both bounds are evaluated first so a minimum sitting on a bound is found
    exactly.  Stops when the bracket is no wider than ``tol``; if
    ``max_evals`` runs out first, the best point so far is returned with
    ``converged=False``.
    """
    if not lo < hi:
        raise SplineError(f"need lo < hi, got [{lo}, {hi}]")
    if not tol > 0:
        raise SplineError(f"tolerance must be positive, got {tol}")
    if max_evals < 4:
        raise SplineError("golden-section search needs at least 4 evaluations")
    trace: list[Evaluation] = []

    def f(x: float) -> float:
        value = float(objective(x))
        ev = Evaluation(len(trace), float(x), value)
        if callback is not None:
            callback(ev)
        trace.append(ev)
        return value

    f(lo)
    f(hi)
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    converged = False
    while True:
        if b - a <= tol:
            converged = True
            break
        if len(trace) >= max_evals:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    best = min(trace, key=lambda e: (e.value, e.iteration))
    if not converged:
        log.warning("golden-section search stopped after %d evaluations (bracket %.3g)", len(trace), b - a)
    return MinimizeResult(best.x, best.value, len(trace), converged, trace)


@dataclass
class OptimizationTrace:
    result: MinimizeResult
    bounds: tuple[float, float]
    output_dir: str

    @property
    def records(self) -> list[Evaluation]:
        return self.result.trace

    def to_csv(self) -> str:
        lines = ["iteration,y,objective,file"]
        for ev in self.records:
            name = os.path.basename(ev.path) if ev.path else ""
            lines.append(f"{ev.iteration},{ev.x!r},{ev.value!r},{name}")
        return "\n".join(lines) + "\n"


def run_parabola_demo(
    output_dir: str | os.PathLike,
    bounds: tuple[float, float] = DEFAULT_BOUNDS,
    tol: float = 1e-6,
    max_evals: int = 100,
    resolution: int = 101,
) -> OptimizationTrace:
    """Optimize the middle control point, writing ``step_NNN.vtk`` per evaluation.

    Also writes ``trace.csv`` with one line per evaluation.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)

    def write_step(ev: Evaluation) -> None:
        path = out / f"step_{ev.iteration:03d}.vtk"
        write_vtk(SplineFile.of(design_curve(ev.x)), [[resolution]], path)
        ev.path = str(path)

    result = minimize_bounded(objective_area, bounds[0], bounds[1], tol, max_evals, callback=write_step)
    trace = OptimizationTrace(result, (float(bounds[0]), float(bounds[1])), str(out))
    (out / "trace.csv").write_text(trace.to_csv())
    return trace
