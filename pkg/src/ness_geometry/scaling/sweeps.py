"""Single-point pipeline, size series and parameter grids."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ness_geometry.errors import NessError
from ness_geometry.gaussian.states import CorrelationMatrix, purity
from ness_geometry.geometry.bures import (
    BoundReport,
    MetricTensor,
    bound_report,
    metric_tensor,
)
from ness_geometry.lindblad.shape import build_structure, gap
from ness_geometry.lindblad.sylvester import (
    DerivativeSet,
    SylvesterSolution,
    solve_derivatives,
    solve_steady,
)
from ness_geometry.models.parametrized import ParametrizedModel
from ness_geometry.models.ring import (
    RingConfig,
    build_ring_numeric,
    ring_analytic_correlations,
    ring_metric_analytic,
    ring_model,
)
from ness_geometry.models.xy_chain import XYBoundaryConfig, xy_boundary_model
from ness_geometry.scaling.fits import ScalingFit, fit_powerlaw

__all__ = [
    "STATUS_OK",
    "PhasePoint",
    "PointEvaluation",
    "Evaluator",
    "evaluate_detailed",
    "evaluate_point",
    "evaluate_ring_analytic",
    "xy_boundary_evaluator",
    "ring_numeric_evaluator",
    "ring_analytic_evaluator",
    "scaling_series",
    "series_fits",
    "sweep_grid",
    "ridge_location",
]

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
_PSD_SLACK = 1e-9


@dataclass(frozen=True)
class PhasePoint:
    """Metric, gap and purity of the steady state at one point and size.

    Failed points carry the error class name in `status` and NaN values.
    """

    h: float
    gamma: float
    n: int
    g_max: float
    g_hh: float
    g_gg: float
    g_hg: float
    delta: float
    purity: float
    status: str = STATUS_OK

    def __post_init__(self) -> None:
        """Check that the largest eigenvalue dominates the diagonal."""
        floor = max(self.g_hh, self.g_gg) - _PSD_SLACK * max(1.0, self.g_max)
        if self.ok and self.g_max < floor:
            logger.warning(
                "g_max %.6e below a diagonal entry at h=%g, gamma=%g.",
                self.g_max,
                self.h,
                self.gamma,
            )

    @property
    def ok(self) -> bool:
        """Whether the point was evaluated."""
        return self.status == STATUS_OK

    @classmethod
    def failed(cls, h: float, gamma: float, n: int, status: str) -> "PhasePoint":
        """Placeholder row for a point whose evaluation raised."""
        nan = math.nan
        return cls(h, gamma, n, nan, nan, nan, nan, nan, nan, status)

    @classmethod
    def from_metric(
        cls,
        h: float,
        gamma: float,
        n: int,
        metric: MetricTensor,
        delta: float,
        purity: float,
    ) -> "PhasePoint":
        """Assemble a row from a metric over axes ``("h", "gamma")``."""
        return cls(
            h=h,
            gamma=gamma,
            n=n,
            g_max=metric.largest_eigenvalue,
            g_hh=metric.component("h", "h"),
            g_gg=metric.component("gamma", "gamma"),
            g_hg=metric.component("h", "gamma"),
            delta=delta,
            purity=purity,
        )


@dataclass(frozen=True, eq=False)
class PointEvaluation:
    """All intermediate results of the pipeline at one point."""

    point: PhasePoint
    solution: SylvesterSolution
    derivatives: DerivativeSet
    metric: MetricTensor
    bounds: Tuple[BoundReport, ...] = ()


Evaluator = Callable[[int, float, float], PhasePoint]


def evaluate_detailed(
    model: ParametrizedModel,
    point: Optional[Mapping[str, float]] = None,
    with_bounds: bool = False,
) -> PointEvaluation:
    """Build, solve, differentiate and measure the steady state at `point`.

    Parameters
    ----------
    model : ParametrizedModel
        Family over the axes ``("h", "gamma")``.
    point : Mapping[str, float], optional
        Parameter point; the model defaults fill the rest.
    with_bounds : bool
        Also evaluate the line-element bounds along each axis. Defaults to False.

    Returns
    -------
    PointEvaluation
        The steady state, its derivatives, the metric and the summary row.
    """
    full = model.point(point)
    S = model.structure(full)
    report = gap(S)
    solution = solve_steady(S, report)
    dS = model.structure_derivatives(full)
    derivatives = solve_derivatives(S, dS, solution.C, solution.factor)
    metric = metric_tensor(solution.C, derivatives)
    bounds: Tuple[BoundReport, ...] = ()
    if with_bounds:
        bounds = tuple(
            bound_report(S, item, solution.C, dc)
            for item, dc in zip(dS, derivatives.dC)
        )
    row = PhasePoint.from_metric(
        full["h"], full["gamma"], S.n, metric, report.delta, purity(solution.C)
    )
    logger.debug("Evaluated %s at %s: |g| = %.6e", model.name, full, row.g_max)
    return PointEvaluation(row, solution, derivatives, metric, bounds)


def evaluate_point(
    model: ParametrizedModel, point: Optional[Mapping[str, float]] = None
) -> PhasePoint:
    """Summary row of `evaluate_detailed`."""
    return evaluate_detailed(model, point).point


def evaluate_ring_analytic(cfg: RingConfig) -> PhasePoint:
    """Summary row of the ring from its weak-coupling formulas.

    The gap is that of the numeric ring at ``cfg.epsilon``.
    """
    metric = ring_metric_analytic(cfg)
    C: CorrelationMatrix = ring_analytic_correlations(cfg)
    delta = gap(build_structure(build_ring_numeric(cfg))).delta
    return PhasePoint.from_metric(cfg.h, cfg.gamma, cfg.n, metric, delta, purity(C))


def xy_boundary_evaluator(base: XYBoundaryConfig) -> Evaluator:
    """Evaluator of the boundary-driven chain with the rates of `base`."""

    def evaluate(n: int, h: float, gamma: float) -> PhasePoint:
        return evaluate_point(xy_boundary_model(replace(base, n=n, h=h, gamma=gamma)))

    return evaluate


def ring_numeric_evaluator(base: RingConfig) -> Evaluator:
    """Evaluator of the numeric ring with the bath of `base`."""

    def evaluate(n: int, h: float, gamma: float) -> PhasePoint:
        return evaluate_point(ring_model(replace(base, n=n, h=h, gamma=gamma)))

    return evaluate


def ring_analytic_evaluator(base: RingConfig) -> Evaluator:
    """Evaluator of the closed-form ring with the bath of `base`."""

    def evaluate(n: int, h: float, gamma: float) -> PhasePoint:
        return evaluate_ring_analytic(replace(base, n=n, h=h, gamma=gamma))

    return evaluate


def _guarded(evaluator: Evaluator, n: int, h: float, gamma: float) -> PhasePoint:
    try:
        return evaluator(n, h, gamma)
    except (NessError, np.linalg.LinAlgError) as err:
        logger.warning("Point n=%d, h=%g, gamma=%g failed: %s", n, h, gamma, err)
        return PhasePoint.failed(h, gamma, n, type(err).__name__)


def _run(tasks: Sequence[Tuple[int, float, float]], evaluator: Evaluator, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [_guarded(evaluator, *task) for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda task: _guarded(evaluator, *task), tasks))


def scaling_series(
    evaluator: Evaluator, ns: Sequence[int], h: float, gamma: float, workers: int = 1
) -> List[PhasePoint]:
    """Evaluate one parameter point over several sizes.

    Parameters
    ----------
    evaluator : Evaluator
        Point evaluator of a model family.
    ns : Sequence[int]
        Sizes.
    h : float
        Transverse field.
    gamma : float
        Anisotropy.
    workers : int
        Number of threads. Defaults to 1.

    Returns
    -------
    List[PhasePoint]
        One row per size, in the order of `ns`.
    """
    return _run([(int(n), h, gamma) for n in ns], evaluator, workers)


def series_fits(points: Sequence[PhasePoint]) -> Dict[str, ScalingFit]:
    """Power-law fits of ``delta``, ``g_max``, ``g_hh`` and ``g_gg`` over a size series.

    Failed rows are skipped; a quantity is left out when its fit is out of domain.

    Parameters
    ----------
    points : Sequence[PhasePoint]
        A size series at one parameter point.

    Returns
    -------
    Dict[str, ScalingFit]
        Fits keyed by quantity name.
    """
    good = [p for p in points if p.ok]
    ns = [p.n for p in good]
    fits = {}
    for key in ("delta", "g_max", "g_hh", "g_gg"):
        try:
            fits[key] = fit_powerlaw(ns, [getattr(p, key) for p in good])
        except NessError as err:
            logger.warning("No fit of %s: %s", key, err)
    return fits


def sweep_grid(
    evaluator: Evaluator,
    h_values: Sequence[float],
    gamma_values: Sequence[float],
    n: int,
    workers: int = 1,
) -> List[PhasePoint]:
    """Evaluate a grid over ``(h, gamma)`` at fixed size.

    Parameters
    ----------
    evaluator : Evaluator
        Point evaluator of a model family.
    h_values : Sequence[float]
        Field values, the outer loop.
    gamma_values : Sequence[float]
        Anisotropy values, the inner loop.
    n : int
        Size.
    workers : int
        Number of threads. Defaults to 1.

    Returns
    -------
    List[PhasePoint]
        ``len(h_values) * len(gamma_values)`` rows in row-major order; failures are
        flagged in their row.
    """
    tasks = [(int(n), float(h), float(g)) for h in h_values for g in gamma_values]
    logger.info("Sweeping %d points at n = %d with %d workers", len(tasks), n, workers)
    return _run(tasks, evaluator, workers)


def ridge_location(
    points: Sequence[PhasePoint], key: str = "g_max"
) -> Tuple[float, float]:
    """Field value and height of the maximum of `key` along a one-dimensional sweep.

    Parameters
    ----------
    points : Sequence[PhasePoint]
        Rows of a sweep in h.
    key : str
        Quantity to maximize. Defaults to ``g_max``.

    Returns
    -------
    Tuple[float, float]
        ``(h, value)`` at the maximum over successful rows.

    Raises
    ------
    ValueError
        If no row succeeded.
    """
    good = [p for p in points if p.ok]
    if not good:
        raise ValueError("No successful point in the sweep.")
    best = max(good, key=lambda p: getattr(p, key))
    return best.h, float(getattr(best, key))
