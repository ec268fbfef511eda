"""Power-law fits over system size and their comparison with the known phase table."""

import enum
import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from ness_geometry.errors import FitDomainError
from ness_geometry.models.xy_chain import PhaseDiagnostics, PhaseLabel

__all__ = [
    "MIN_FIT_POINTS",
    "GOOD_R_SQUARED",
    "AVERAGE_R_SQUARED",
    "EXPONENT_TOLERANCE",
    "FitQuality",
    "ScalingFit",
    "PhaseRow",
    "PHASE_TABLE",
    "PhaseReport",
    "fit_powerlaw",
    "classify_phase",
]

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 4
GOOD_R_SQUARED = 0.995
AVERAGE_R_SQUARED = 0.95
EXPONENT_TOLERANCE = 0.5


class FitQuality(str, enum.Enum):
    """Quality of a log-log fit."""

    GOOD = "good"
    AVERAGE = "average"
    BAD = "bad"


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares line through ``(log n, log value)``."""

    exponent: float
    intercept: float
    r_squared: float
    n_values: Tuple[int, ...]
    values: Tuple[float, ...]
    quality_label: FitQuality


@dataclass(frozen=True)
class PhaseRow:
    """Expected exponents of the gap and of the metric in one phase."""

    name: str
    delta_exponent: float
    g_exponent: float
    g_component: str


PHASE_TABLE = {
    "h=0": PhaseRow("Critical (*) h = 0", -3.0, 6.0, "g_hh"),
    "LRMC": PhaseRow("Long-range", -3.0, 3.0, "g_max"),
    "critical": PhaseRow("Critical h = h_c", -5.0, 6.0, "g_max"),
    "SRMC": PhaseRow("Short-range", -3.0, 1.0, "g_max"),
    "gamma=0": PhaseRow("Critical (*) gamma = 0", -3.0, 2.0, "g_gg"),
}


@dataclass(frozen=True)
class PhaseReport:
    """Outcome of comparing fitted exponents with `PHASE_TABLE`.

    Attributes
    ----------
    row : str
        Key of the row implied by the parameters.
    label : str
        Display name of that row.
    consistent : bool
        Whether the available fits agree with the row within `EXPONENT_TOLERANCE`.
    matching_rows : Tuple[str, ...]
        Every row the fits agree with.
    notes : Tuple[str, ...]
        Disagreements, one per compared exponent.
    """

    row: str
    label: str
    consistent: bool
    matching_rows: Tuple[str, ...]
    notes: Tuple[str, ...]


def _quality(r_squared: float) -> FitQuality:
    if r_squared >= GOOD_R_SQUARED:
        return FitQuality.GOOD
    if r_squared >= AVERAGE_R_SQUARED:
        return FitQuality.AVERAGE
    return FitQuality.BAD


def fit_powerlaw(ns: Sequence[int], values: Sequence[float]) -> ScalingFit:
    """Fit ``value = exp(intercept) * n^exponent``.

    Parameters
    ----------
    ns : Sequence[int]
        Strictly increasing positive sizes, at least `MIN_FIT_POINTS`.
    values : Sequence[float]
        Positive values, one per size.

    Returns
    -------
    ScalingFit
        Slope, intercept, coefficient of determination and quality label.

    Raises
    ------
    FitDomainError
        If the input is outside the domain of a log-log fit.
    """
    n_arr = np.asarray(ns, dtype=float)
    v_arr = np.asarray(values, dtype=float)
    if n_arr.shape != v_arr.shape or n_arr.ndim != 1:
        raise FitDomainError(
            f"Sizes and values differ in length: {n_arr.size} vs {v_arr.size}."
        )
    if n_arr.size < MIN_FIT_POINTS:
        raise FitDomainError(
            f"A fit needs at least {MIN_FIT_POINTS} sizes, found {n_arr.size}."
        )
    if np.any(n_arr <= 0) or np.any(np.diff(n_arr) <= 0):
        raise FitDomainError("Sizes must be positive and strictly increasing.")
    if not np.all(np.isfinite(v_arr)) or np.any(v_arr <= 0):
        raise FitDomainError(f"Values must be finite and > 0, found {v_arr.tolist()}.")
    x, y = np.log(n_arr), np.log(v_arr)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sum((y - (slope * x + intercept)) ** 2))
    total = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - residual / total if total > 0 else 1.0
    r_squared = min(1.0, max(0.0, r_squared))
    return ScalingFit(
        exponent=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        n_values=tuple(int(n) for n in ns),
        values=tuple(float(v) for v in values),
        quality_label=_quality(r_squared),
    )


def _implied_row(h: float, gamma: float, diagnostics: PhaseDiagnostics) -> str:
    if h == 0:
        return "h=0"
    if gamma == 0:
        return "gamma=0"
    if diagnostics.phase_label is PhaseLabel.CRITICAL_LINE:
        return "critical"
    return "LRMC" if diagnostics.phase_label is PhaseLabel.LRMC else "SRMC"


def _agrees(fit: Optional[ScalingFit], expected: float) -> Optional[bool]:
    if fit is None:
        return None
    return abs(fit.exponent - expected) <= EXPONENT_TOLERANCE


def classify_phase(
    delta_fit: Optional[ScalingFit],
    g_fits: Mapping[str, ScalingFit],
    diagnostics: PhaseDiagnostics,
    h: float,
    gamma: float,
) -> PhaseReport:
    """Compare fitted exponents with the phase table.

    Parameters
    ----------
    delta_fit : ScalingFit, optional
        Fit of the gap.
    g_fits : Mapping[str, ScalingFit]
        Fits of metric quantities keyed by ``g_max``, ``g_hh``, ``g_gg``.
    diagnostics : PhaseDiagnostics
        Diagnostics at ``(h, gamma)``.
    h : float
        Transverse field.
    gamma : float
        Anisotropy.

    Returns
    -------
    PhaseReport
        The implied row, whether the fits agree with it, and notes.
    """
    implied = _implied_row(h, gamma, diagnostics)
    matching, notes = [], []
    for key, row in PHASE_TABLE.items():
        checks = [
            _agrees(delta_fit, row.delta_exponent),
            _agrees(g_fits.get(row.g_component), row.g_exponent),
        ]
        known = [c for c in checks if c is not None]
        if known and all(known):
            matching.append(key)
    row = PHASE_TABLE[implied]
    compared = [
        ("delta", delta_fit, row.delta_exponent),
        (row.g_component, g_fits.get(row.g_component), row.g_exponent),
    ]
    for name, fit, expected in compared:
        if fit is not None and not _agrees(fit, expected):
            notes.append(
                f"{name}: exponent {fit.exponent:.3f} differs from {expected:g} "
                f"(fit {fit.quality_label.value})"
            )
    consistent = not notes
    if not consistent:
        logger.info("Fits disagree with %s: %s", row.name, "; ".join(notes))
    return PhaseReport(implied, row.name, consistent, tuple(matching), tuple(notes))
