"""Task orchestration and the CSV/JSON writers."""

import csv
import dataclasses
import enum
import json
import logging
import math
import time
from dataclasses import dataclass, field
from typing import IO, Any, Callable, Dict, List, Optional

import numpy as np

from ness_geometry import __version__
from ness_geometry.cli.config import ROW_TASKS, RunConfig, resolve_workers
from ness_geometry.gaussian.correlators import z_expectation, zz_correlator
from ness_geometry.gaussian.states import (
    CorrelationMatrix,
    GMatrix,
    correlation_from_G,
    purity,
)
from ness_geometry.geometry.bures import gaussian_fidelity
from ness_geometry.lindblad.shape import (
    QuadraticLindbladian,
    build_structure,
    gap,
    prop1_check,
)
from ness_geometry.lindblad.sylvester import solve_steady
from ness_geometry.models.parametrized import ParametrizedModel
from ness_geometry.models.ring import (
    build_ring_numeric,
    ring_analytic_correlations,
    ring_metric_analytic,
    ring_model,
)
from ness_geometry.models.xy_chain import (
    build_xy_boundary,
    phase_diagnostics,
    xy_boundary_model,
)
from ness_geometry.oracle.dense import (
    CAR_MAX_MODES,
    SIGMA_Z,
    car_superoperator_check,
    correlations_dense,
    dense_liouvillean,
    gaussian_state_dense,
    quadratic_form_check,
    site_operator,
    spin_liouvillean_xy,
    steady_state_dense,
    trace_preservation_violation,
    uhlmann_fidelity_dense,
)
from ness_geometry.scaling.fits import classify_phase
from ness_geometry.scaling.sweeps import (
    Evaluator,
    PhasePoint,
    evaluate_detailed,
    evaluate_ring_analytic,
    ring_analytic_evaluator,
    ring_numeric_evaluator,
    scaling_series,
    series_fits,
    sweep_grid,
    xy_boundary_evaluator,
)

__all__ = [
    "SCHEMA_VERSION",
    "CSV_HEADER",
    "ORACLE_ATOL",
    "CAR_ATOL",
    "FIDELITY_PAIRS",
    "RunRecord",
    "run",
    "write_json",
    "write_csv",
    "write_record",
]

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CSV_HEADER = (
    "h",
    "gamma",
    "n",
    "g_max",
    "g_hh",
    "g_gg",
    "g_hg",
    "delta",
    "purity",
    "status",
)
ORACLE_ATOL = 1e-8
CAR_ATOL = 1e-10
FIDELITY_PAIRS = 20


@dataclass(frozen=True, eq=False)
class RunRecord:
    """Result of one run.

    Attributes
    ----------
    config : Dict[str, Any]
        Echo of the configuration.
    version : str
        Package version.
    task : str
        The task that ran.
    payload : Dict[str, Any]
        Task-specific results, already reduced to plain Python values.
    rows : List[PhasePoint]
        Sweep rows of the tasks in `ROW_TASKS`.
    wall_time : float
        Seconds spent; logged, never written.
    exit_code : int
        0, or 4 when an oracle check exceeded its tolerance.
    """

    config: Dict[str, Any]
    version: str
    task: str
    payload: Dict[str, Any]
    rows: List[PhasePoint] = field(default_factory=list)
    wall_time: float = 0.0
    exit_code: int = 0

    def as_dict(self) -> Dict[str, Any]:
        """Serializable form; `wall_time` is left out so that output is reproducible."""
        record = {
            "schema_version": SCHEMA_VERSION,
            "version": self.version,
            "task": self.task,
            "config": self.config,
            "payload": self.payload,
        }
        if self.task in ROW_TASKS:
            record["rows"] = [_plain(dataclasses.asdict(row)) for row in self.rows]
        return record


def _plain(value: Any) -> Any:
    """Reduce numpy, enum and dataclass values to JSON-ready Python values."""
    if isinstance(value, enum.Enum):
        return value.value
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return _plain(dataclasses.asdict(value))
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, complex):
        return {"re": _plain(value.real), "im": _plain(value.imag)}
    return value


def _matrix(data: np.ndarray) -> Dict[str, Any]:
    """Row-major flattening of a complex matrix."""
    return {
        "shape": list(data.shape),
        "re": np.real(data).ravel().tolist(),
        "im": np.imag(data).ravel().tolist(),
    }


def _lindbladian(config: RunConfig, n: int) -> QuadraticLindbladian:
    if config.model == "xy_boundary":
        return build_xy_boundary(config.xy_config(n, config.h, config.gamma))
    return build_ring_numeric(config.ring_config(n, config.h, config.gamma))


def _model(config: RunConfig) -> ParametrizedModel:
    if config.model == "xy_boundary":
        return xy_boundary_model(config.xy_config(config.n, config.h, config.gamma))
    return ring_model(config.ring_config(config.n, config.h, config.gamma))


def _evaluator(config: RunConfig) -> Evaluator:
    if config.model == "xy_boundary":
        return xy_boundary_evaluator(config.xy_config(2, 0.0, 0.0))
    if config.model == "ring_numeric":
        return ring_numeric_evaluator(config.ring_config(2, 0.0, 0.0))
    return ring_analytic_evaluator(config.ring_config(2, 0.0, 0.0))


def _spin_observables(C: CorrelationMatrix) -> Dict[str, Any]:
    sites = range(1, C.n + 1)
    return {
        "z": [z_expectation(C, i) for i in sites],
        "zz_nearest": [zz_correlator(C, i, i + 1) for i in range(1, C.n)],
    }


def _steady_state(config: RunConfig, workers: int) -> Dict[str, Any]:
    if config.model == "ring_analytic":
        cfg = config.ring_config(config.n, config.h, config.gamma)
        C = ring_analytic_correlations(cfg)
        payload: Dict[str, Any] = {"method": "ring_analytic", "residual": None}
    else:
        S = build_structure(_lindbladian(config, config.n))
        solution = solve_steady(S)
        C = solution.C
        payload = {"method": solution.method_tag, "residual": solution.residual}
    payload.update(n=C.n, purity=purity(C), C=_matrix(C.data), **_spin_observables(C))
    return payload


def _metric(config: RunConfig, workers: int) -> Dict[str, Any]:
    if config.model == "ring_analytic":
        ring = config.ring_config(config.n, config.h, config.gamma)
        metric = ring_metric_analytic(ring)
        point = evaluate_ring_analytic(ring)
        bounds: List[Any] = []
    else:
        evaluation = evaluate_detailed(_model(config), with_bounds=True)
        metric, point = evaluation.metric, evaluation.point
        bounds = list(evaluation.bounds)
    return {
        "params": list(metric.params),
        "g": metric.g.ravel().tolist(),
        "eigenvalues": metric.eigenvalues,
        "point": point,
        "bounds": bounds,
    }


def _gap(config: RunConfig, workers: int) -> Dict[str, Any]:
    report = gap(build_structure(_lindbladian(config, config.n)))
    payload: Dict[str, Any] = {
        "delta": report.delta,
        "stable": report.stable,
        "diagonalizable_hint": report.diagonalizable_hint,
        "eigvec_condition": report.eigvec_condition,
        "x_spectrum": {
            "re": np.real(report.x_spectrum).tolist(),
            "im": np.imag(report.x_spectrum).tolist(),
        },
    }
    if config.model == "xy_boundary":
        payload["diagnostics"] = phase_diagnostics(config.h, config.gamma)
    return payload


def _scaling(config: RunConfig, workers: int) -> Dict[str, Any]:
    rows = scaling_series(
        _evaluator(config), config.ns, config.h, config.gamma, workers
    )
    fits = series_fits(rows)
    payload: Dict[str, Any] = {"rows": rows, "fits": fits}
    if config.model == "xy_boundary":
        g_fits = {key: fit for key, fit in fits.items() if key != "delta"}
        diagnostics = phase_diagnostics(config.h, config.gamma)
        payload["phase"] = classify_phase(
            fits.get("delta"), g_fits, diagnostics, config.h, config.gamma
        )
    return payload


def _phase_diagram(config: RunConfig, workers: int) -> Dict[str, Any]:
    h_values = np.linspace(config.h_min, config.h_max, config.h_steps)
    gamma_values = np.linspace(config.gamma_min, config.gamma_max, config.gamma_steps)
    rows = sweep_grid(_evaluator(config), h_values, gamma_values, config.n, workers)
    return {"rows": rows, "failures": sum(not row.ok for row in rows)}


def _random_correlations(rng: np.random.Generator, n: int) -> CorrelationMatrix:
    a = 0.5 * rng.normal(size=(2 * n, 2 * n))
    return correlation_from_G(GMatrix.from_array(a - a.T))


def _oracle_check(config: RunConfig, workers: int) -> Dict[str, Any]:
    n = config.n
    model = _lindbladian(config, n)
    S = build_structure(model)
    C = solve_steady(S).C
    state = steady_state_dense(dense_liouvillean(model))
    C_dense = correlations_dense(state)
    z_dev = max(
        abs(
            z_expectation(C, i)
            - state.expectation(site_operator(SIGMA_Z, i - 1, n)).real
        )
        for i in range(1, n + 1)
    )
    zz_dev = max(
        abs(
            zz_correlator(C, i, j)
            - state.expectation(
                site_operator(SIGMA_Z, i - 1, n) @ site_operator(SIGMA_Z, j - 1, n)
            ).real
        )
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    )
    checks: Dict[str, float] = {
        "correlations": float(np.max(np.abs(C.data - C_dense.data))),
        "purity": abs(purity(C) - state.purity()),
        "z": z_dev,
        "zz": zz_dev,
    }
    if config.model == "xy_boundary":
        spin_liouvillean = spin_liouvillean_xy(
            config.xy_config(n, config.h, config.gamma)
        )
        spin = correlations_dense(steady_state_dense(spin_liouvillean))
        checks["spin_chain"] = float(np.max(np.abs(spin.data - C.data)))
        checks["trace_preservation"] = trace_preservation_violation(spin_liouvillean)
    rng = np.random.default_rng(config.seed)
    fidelity_dev = 0.0
    for _ in range(FIDELITY_PAIRS):
        C1, C2 = _random_correlations(rng, n), _random_correlations(rng, n)
        dense = uhlmann_fidelity_dense(
            gaussian_state_dense(C1), gaussian_state_dense(C2)
        )
        fidelity_dev = max(fidelity_dev, abs(dense - gaussian_fidelity(C1, C2)))
    checks["fidelity"] = fidelity_dev
    car: Dict[str, float] = {}
    if n <= CAR_MAX_MODES:
        report = car_superoperator_check(n)
        car = {
            "car": report.max_car_violation,
            "anticommutator": report.max_anticommutator,
            "vacuum": report.vacuum_violation,
            "quadratic_form": quadratic_form_check(model),
        }
    failed = sorted(
        [key for key, value in checks.items() if not value <= ORACLE_ATOL]
        + [key for key, value in car.items() if not value <= CAR_ATOL]
    )
    # informational: the two gaps differ when the slowest x is real
    prop1 = prop1_check(S)
    return {
        "n": n,
        "max_deviation": checks,
        "car": car,
        "prop1": prop1,
        "failed": failed,
    }


_TASKS: Dict[str, Callable[[RunConfig, int], Dict[str, Any]]] = {
    "steady-state": _steady_state,
    "metric": _metric,
    "gap": _gap,
    "scaling": _scaling,
    "phase-diagram": _phase_diagram,
    "oracle-check": _oracle_check,
}


def run(config: RunConfig, workers: Optional[int] = None) -> RunRecord:
    """Execute the task of `config`.

    Parameters
    ----------
    config : RunConfig
        Validated configuration.
    workers : int, optional
        Thread count of sweeps; see `resolve_workers`.

    Returns
    -------
    RunRecord
        The record, with exit code 4 if an oracle check failed.
    """
    count = resolve_workers(workers, config)
    logger.info("Running %s on %s with %d workers", config.task, config.model, count)
    start = time.perf_counter()
    payload = _TASKS[config.task](config, count)
    rows = payload.pop("rows", [])
    exit_code = 4 if payload.get("failed") else 0
    wall_time = time.perf_counter() - start
    logger.info("Finished %s in %.3f s", config.task, wall_time)
    if exit_code:
        logger.error("Oracle checks above tolerance: %s", ", ".join(payload["failed"]))
    return RunRecord(
        config=_plain(config.echo()),
        version=__version__,
        task=config.task,
        payload=_plain(payload),
        rows=list(rows),
        wall_time=wall_time,
        exit_code=exit_code,
    )


def write_json(record: RunRecord, handle: IO[str]) -> None:
    """Write `record` as sorted-key JSON; floats use their shortest round-trip form."""
    json.dump(record.as_dict(), handle, indent=2, sort_keys=True, allow_nan=False)
    handle.write("\n")


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def write_csv(record: RunRecord, handle: IO[str]) -> None:
    """Write the rows of `record` with header `CSV_HEADER` and 17 significant digits."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in record.rows:
        writer.writerow([_cell(getattr(row, key)) for key in CSV_HEADER])


def write_record(record: RunRecord, handle: IO[str], output_format: str) -> None:
    """Dispatch to `write_csv` or `write_json`."""
    if output_format == "csv":
        write_csv(record, handle)
    else:
        write_json(record, handle)
