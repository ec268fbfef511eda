"""Boundary-driven XY spin chain.

The chain

.. math::

    H = \\sum_{i=1}^{n-1} \\left(\\frac{1+\\gamma}{2} \\sigma^x_i \\sigma^x_{i+1}
    + \\frac{1-\\gamma}{2} \\sigma^y_i \\sigma^y_{i+1}\\right) + h \\sum_i \\sigma^z_i

is coupled at its ends to reservoirs through :math:`L^\\pm_L = \\sqrt{\\Gamma^\\pm_L}
\\sigma^\\pm_1` and :math:`L^\\pm_R = \\sqrt{\\Gamma^\\pm_R}\\sigma^\\pm_n`. Under the
Jordan-Wigner map :math:`f_\\ell = \\prod_{k<\\ell}\\sigma^z_k\\,\\sigma^+_\\ell` one has

.. math::

    \\sigma^z_\\ell = i w_\\ell w_{n+\\ell}, \\quad
    \\sigma^x_\\ell\\sigma^x_{\\ell+1} = i w_{n+\\ell} w_{\\ell+1}, \\quad
    \\sigma^y_\\ell\\sigma^y_{\\ell+1} = -i w_\\ell w_{n+\\ell+1}.

The right-end operators carry the total parity string, which acts trivially on
parity-even states, so the dissipator stays quadratic.
"""

import enum
import logging
import math
from dataclasses import dataclass, replace
from typing import Mapping, Optional

import numpy as np

from ness_geometry.errors import StructuralInputError
from ness_geometry.lindblad.shape import QuadraticLindbladian
from ness_geometry.models.parametrized import ParametrizedModel

__all__ = [
    "HAMILTONIAN_SCALE",
    "CRITICAL_LINE_ATOL",
    "XYBoundaryConfig",
    "PhaseLabel",
    "PhaseDiagnostics",
    "xy_hamiltonian",
    "annihilation_row",
    "creation_row",
    "build_xy_boundary",
    "xy_boundary_model",
    "critical_field",
    "xy_dispersion",
    "phase_diagnostics",
]

logger = logging.getLogger(__name__)

# Majorana H is twice the literal Jordan-Wigner image so that x_k -> ±4i omega_k.
HAMILTONIAN_SCALE = 2.0
CRITICAL_LINE_ATOL = 1e-6


@dataclass(frozen=True)
class XYBoundaryConfig:
    """Parameters of the boundary-driven XY chain.

    Attributes
    ----------
    n : int
        Number of sites, at least 2.
    h : float
        Transverse field.
    gamma : float
        Anisotropy.
    gl_plus, gl_minus, gr_plus, gr_minus : float
        Non-negative rates of the left and right reservoirs.
    """

    n: int
    h: float
    gamma: float
    gl_plus: float = 0.3
    gl_minus: float = 0.5
    gr_plus: float = 0.1
    gr_minus: float = 0.5

    def __post_init__(self) -> None:
        """Validate the configuration."""
        if int(self.n) != self.n or self.n < 2:
            raise StructuralInputError(f"The chain needs n >= 2 sites, found {self.n}.")
        rates = ("gl_plus", "gl_minus", "gr_plus", "gr_minus")
        for key in ("h", "gamma") + rates:
            value = getattr(self, key)
            if not math.isfinite(value):
                raise StructuralInputError(f"{key} must be finite, found {value}.")
            if key in rates and value < 0:
                raise StructuralInputError(f"Rate {key} must be >= 0, found {value}.")
        if self.gl_plus + self.gl_minus == 0 or self.gr_plus + self.gr_minus == 0:
            logger.warning(
                "An edge of the chain has no reservoir; the NESS may not be unique."
            )


class PhaseLabel(str, enum.Enum):
    """Magnetic phases of the boundary-driven XY chain."""

    SRMC = "SRMC"
    LRMC = "LRMC"
    CRITICAL_LINE = "critical-line"


@dataclass(frozen=True)
class PhaseDiagnostics:
    """Critical field, localization length and phase label at a point."""

    h_c: float
    xi: Optional[float]
    phase_label: PhaseLabel


def xy_hamiltonian(
    n: int,
    h: float,
    gamma: float,
    periodic: bool = False,
    scale: float = HAMILTONIAN_SCALE,
) -> np.ndarray:
    """Majorana matrix of the XY chain, scaled by `scale`.

    Parameters
    ----------
    n : int
        Number of sites.
    h : float
        Transverse field.
    gamma : float
        Anisotropy.
    periodic : bool
        Couple site n back to site 1 (fermionic periodic boundary). Defaults to False.
    scale : float
        Overall factor. Defaults to `HAMILTONIAN_SCALE`.

    Returns
    -------
    np.ndarray
        2n x 2n purely imaginary antisymmetric H.
    """
    H = np.zeros((2 * n, 2 * n), dtype=complex)
    sites = np.arange(n)
    H[sites, n + sites] = 0.5j * h
    bonds = sites if periodic else sites[:-1]
    nxt = (bonds + 1) % n
    H[n + bonds, nxt] += 0.25j * (1.0 + gamma)
    H[bonds, n + nxt] += -0.25j * (1.0 - gamma)
    H = H - H.T
    return scale * H


def annihilation_row(n: int, site: int) -> np.ndarray:
    """Majorana coefficients of ``f_site = (w_site - i w_{n+site})/2``, zero-based."""
    row = np.zeros(2 * n, dtype=complex)
    row[site] = 0.5
    row[n + site] = -0.5j
    return row


def creation_row(n: int, site: int) -> np.ndarray:
    """Majorana coefficients of ``f_site^dagger = (w_site + i w_{n+site})/2``."""
    return annihilation_row(n, site).conj()


def build_xy_boundary(cfg: XYBoundaryConfig) -> QuadraticLindbladian:
    """Quadratic Lindbladian of the boundary-driven XY chain.

    Parameters
    ----------
    cfg : XYBoundaryConfig
        Chain parameters.

    Returns
    -------
    QuadraticLindbladian
        Open-boundary XY Hamiltonian and four Lindblad rows in the order
        ``L_L^+, L_L^-, L_R^+, L_R^-``. ``sigma^+`` lowers the occupation.
    """
    n = cfg.n
    ell = np.stack(
        [
            math.sqrt(cfg.gl_plus) * annihilation_row(n, 0),
            math.sqrt(cfg.gl_minus) * creation_row(n, 0),
            math.sqrt(cfg.gr_plus) * annihilation_row(n, n - 1),
            math.sqrt(cfg.gr_minus) * creation_row(n, n - 1),
        ]
    )
    return QuadraticLindbladian(xy_hamiltonian(n, cfg.h, cfg.gamma), ell)


def xy_boundary_model(cfg: XYBoundaryConfig) -> ParametrizedModel:
    """Boundary-driven chain as a family over ``(h, gamma)`` around `cfg`."""

    def builder(point: Mapping[str, float]) -> QuadraticLindbladian:
        return build_xy_boundary(replace(cfg, h=point["h"], gamma=point["gamma"]))

    return ParametrizedModel(
        name="xy_boundary",
        axes=("h", "gamma"),
        builder=builder,
        defaults={"h": cfg.h, "gamma": cfg.gamma},
    )


def critical_field(gamma: float) -> float:
    """Return ``h_c = |1 - gamma^2|``."""
    return abs(1.0 - gamma**2)


def xy_dispersion(h: float, gamma: float, phi: np.ndarray) -> np.ndarray:
    """Quasiparticle energies ``omega = sqrt((cos phi - h)^2 + gamma^2 sin^2 phi)``."""
    phi = np.asarray(phi, dtype=float)
    return np.sqrt((np.cos(phi) - h) ** 2 + gamma**2 * np.sin(phi) ** 2)


def phase_diagnostics(h: float, gamma: float) -> PhaseDiagnostics:
    """Classify ``(h, gamma)`` into the magnetic phases of the chain.

    Parameters
    ----------
    h : float
        Transverse field.
    gamma : float
        Anisotropy.

    Returns
    -------
    PhaseDiagnostics
        Critical-line within `CRITICAL_LINE_ATOL` of ``|h| = h_c``; SRMC for
        ``|h| > h_c``, ``h = 0`` or ``gamma = 0``; LRMC otherwise. The localization
        length ``xi = sqrt(2 h_c/(|h| - h_c))/8`` is given for ``|h| > h_c > 0``.
    """
    h_c = critical_field(gamma)
    field_abs = abs(h)
    if h != 0 and abs(field_abs - h_c) < CRITICAL_LINE_ATOL:
        label = PhaseLabel.CRITICAL_LINE
    elif field_abs > h_c or h == 0 or gamma == 0:
        label = PhaseLabel.SRMC
    else:
        label = PhaseLabel.LRMC
    xi = None
    if h_c > 0 and field_abs > h_c:
        xi = math.sqrt(2.0 * h_c / (field_abs - h_c)) / 8.0
    return PhaseDiagnostics(h_c=h_c, xi=xi, phase_label=label)
