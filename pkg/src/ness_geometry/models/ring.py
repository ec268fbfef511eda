"""Translationally invariant XY ring with uniform loss and gain.

Every site is coupled to the bath through :math:`L^-_j = \\epsilon\\mu f_j` and
:math:`L^+_j = \\epsilon\\nu f_j^\\dagger`. For :math:`\\epsilon \\to 0` the steady state is
block diagonal over momenta :math:`\\phi_k = 2\\pi k/n` with

.. math::

    C_k = \\frac{i\\Lambda}{2}\\begin{pmatrix} 0 & 1 + e^{iq_k} \\\\
    -1 - e^{-iq_k} & 0 \\end{pmatrix}, \\qquad
    q_k = -2\\arctan\\frac{\\gamma\\sin\\phi_k}{h - \\cos\\phi_k}, \\qquad
    \\Lambda = \\frac{\\nu^2 - \\mu^2}{\\nu^2 + \\mu^2},

and the metric is a sum over momenta.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from ness_geometry.errors import SingularMomentumError, StructuralInputError
from ness_geometry.geometry.bures import MetricTensor
from ness_geometry.gaussian.states import CorrelationMatrix
from ness_geometry.lindblad.shape import QuadraticLindbladian
from ness_geometry.models.parametrized import ParametrizedModel
from ness_geometry.models.xy_chain import annihilation_row, creation_row, xy_hamiltonian

__all__ = [
    "DEFAULT_EPSILON",
    "GAPLESS_ATOL",
    "RingConfig",
    "MomentumAngles",
    "build_ring_numeric",
    "ring_model",
    "fourier_block_basis",
    "momentum_angles",
    "ring_analytic_blocks",
    "ring_analytic_correlations",
    "ring_metric_analytic",
]

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-3
GAPLESS_ATOL = 1e-14


@dataclass(frozen=True)
class RingConfig:
    """Parameters of the dissipative ring.

    Attributes
    ----------
    n : int
        Number of sites, at least 2.
    h : float
        Transverse field.
    gamma : float
        Anisotropy.
    mu : float
        Loss amplitude.
    nu : float
        Gain amplitude.
    epsilon : float
        Coupling scale of the bath.
    """

    n: int
    h: float
    gamma: float
    mu: float = 0.5
    nu: float = 1.0
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self) -> None:
        """Validate the configuration."""
        if int(self.n) != self.n or self.n < 2:
            raise StructuralInputError(f"The ring needs n >= 2 sites, found {self.n}.")
        if self.mu < 0 or self.nu < 0 or self.mu + self.nu == 0:
            raise StructuralInputError(
                f"Loss and gain amplitudes must be >= 0 and not both 0, found "
                f"mu={self.mu}, nu={self.nu}."
            )
        if not self.epsilon > 0:
            raise StructuralInputError(f"epsilon must be > 0, found {self.epsilon}.")

    @property
    def Lambda(self) -> float:  # noqa: N802
        """Population imbalance ``(nu^2 - mu^2)/(nu^2 + mu^2)``."""
        return (self.nu**2 - self.mu**2) / (self.nu**2 + self.mu**2)


@dataclass(frozen=True, eq=False)
class MomentumAngles:
    """Per-momentum angles of the ring.

    Attributes
    ----------
    phi : np.ndarray
        Momenta ``2 pi k / n``.
    omega : np.ndarray
        Dispersion at each momentum.
    q : np.ndarray
        Rotation angles of the steady-state blocks.
    dq_dh : np.ndarray
        Derivative of q along h.
    dq_dgamma : np.ndarray
        Derivative of q along gamma.
    pinned : np.ndarray
        Momenta with ``sin phi = 0``, where q does not move.
    """

    phi: np.ndarray
    omega: np.ndarray
    q: np.ndarray
    dq_dh: np.ndarray
    dq_dgamma: np.ndarray
    pinned: np.ndarray


def build_ring_numeric(cfg: RingConfig) -> QuadraticLindbladian:
    """Quadratic Lindbladian of the ring at finite coupling.

    Parameters
    ----------
    cfg : RingConfig
        Ring parameters.

    Returns
    -------
    QuadraticLindbladian
        Periodic XY Hamiltonian and 2n Lindblad rows, the n losses followed by the
        n gains.
    """
    n = cfg.n
    loss = [cfg.epsilon * cfg.mu * annihilation_row(n, j) for j in range(n)]
    gain = [cfg.epsilon * cfg.nu * creation_row(n, j) for j in range(n)]
    return QuadraticLindbladian(
        xy_hamiltonian(n, cfg.h, cfg.gamma, periodic=True), np.stack(loss + gain)
    )


def ring_model(cfg: RingConfig) -> ParametrizedModel:
    """Numeric ring as a family over ``(h, gamma)`` around `cfg`."""

    def builder(point: Mapping[str, float]) -> QuadraticLindbladian:
        return build_ring_numeric(replace(cfg, h=point["h"], gamma=point["gamma"]))

    return ParametrizedModel(
        name="ring_numeric",
        axes=("h", "gamma"),
        builder=builder,
        defaults={"h": cfg.h, "gamma": cfg.gamma},
    )


def fourier_block_basis(n: int) -> np.ndarray:
    """Unitary V taking Majorana indices to interleaved momentum blocks.

    Row ``2k`` holds the Fourier mode k of ``w_1..w_n`` and row ``2k + 1`` that of
    ``w_{n+1}..w_{2n}``, with ``F_kj = exp(2 pi i k j / n)/sqrt(n)``. Correlations
    transform as ``V C V^dagger``.

    Parameters
    ----------
    n : int
        Number of sites.

    Returns
    -------
    np.ndarray
        The 2n x 2n unitary.
    """
    k = np.arange(n)
    fourier = np.exp(2j * np.pi * np.outer(k, k) / n) / math.sqrt(n)
    V = np.zeros((2 * n, 2 * n), dtype=complex)
    V[0::2, :n] = fourier
    V[1::2, n:] = fourier
    return V


def momentum_angles(cfg: RingConfig) -> MomentumAngles:
    """Momenta, dispersion and rotation angles of the ring.

    Parameters
    ----------
    cfg : RingConfig
        Ring parameters.

    Returns
    -------
    MomentumAngles
        Angles on the grid ``phi_k = 2 pi k / n``, ``k = 0..n-1``.
    """
    k = np.arange(cfg.n)
    phi = 2.0 * np.pi * k / cfg.n
    pinned = (k == 0) | (2 * k == cfg.n)
    sin = np.where(pinned, 0.0, np.sin(phi))
    cos = np.cos(phi)
    detuning = cfg.h - cos
    omega = np.sqrt(detuning**2 + cfg.gamma**2 * sin**2)
    q = -2.0 * np.arctan2(cfg.gamma * sin, detuning)
    safe = np.where(omega > GAPLESS_ATOL, omega, 1.0) ** 2
    dq_dh = np.where(pinned, 0.0, 2.0 * cfg.gamma * sin / safe)
    dq_dgamma = np.where(pinned, 0.0, -2.0 * detuning * sin / safe)
    return MomentumAngles(phi, omega, q, dq_dh, dq_dgamma, pinned)


def _check_gapless(angles: MomentumAngles) -> None:
    singular = np.flatnonzero((angles.omega <= GAPLESS_ATOL) & ~angles.pinned)
    if singular.size:
        raise SingularMomentumError(
            "Dispersion vanishes at moving momenta", singular.tolist()
        )


def ring_analytic_blocks(cfg: RingConfig) -> np.ndarray:
    """Weak-coupling steady-state blocks, one 2 x 2 block per momentum.

    Parameters
    ----------
    cfg : RingConfig
        Ring parameters.

    Returns
    -------
    np.ndarray
        Array of shape ``(n, 2, 2)``.

    Raises
    ------
    SingularMomentumError
        If the dispersion vanishes at a momentum with ``sin phi != 0``.
    """
    angles = momentum_angles(cfg)
    _check_gapless(angles)
    phase = 1.0 + np.exp(1j * angles.q)
    blocks = np.zeros((cfg.n, 2, 2), dtype=complex)
    blocks[:, 0, 1] = 0.5j * cfg.Lambda * phase
    blocks[:, 1, 0] = -0.5j * cfg.Lambda * phase.conj()
    return blocks


def ring_analytic_correlations(cfg: RingConfig) -> CorrelationMatrix:
    """Weak-coupling steady correlation matrix of the ring.

    The Fourier-block form ``V C V^dagger`` is `ring_analytic_blocks` on the diagonal;
    it is Hermitian but not transpose-antisymmetric, so the returned matrix is the
    site-basis C.

    Parameters
    ----------
    cfg : RingConfig
        Ring parameters.

    Returns
    -------
    CorrelationMatrix
        Correlations with eigenvalues ``±Lambda cos(q_k/2)``.
    """
    blocks = ring_analytic_blocks(cfg)
    fourier = np.zeros((2 * cfg.n, 2 * cfg.n), dtype=complex)
    for k, block in enumerate(blocks):
        fourier[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = block
    V = fourier_block_basis(cfg.n)
    return CorrelationMatrix.from_array(V.conj().T @ fourier @ V)


def ring_metric_analytic(cfg: RingConfig) -> MetricTensor:
    """Closed-form weak-coupling metric of the ring over ``(h, gamma)``.

    .. math::

        ds^2 = \\frac{\\Lambda^2}{2} \\sum_k \\frac{1 - \\Lambda^2 \\cos^2(q_k/2)\\cos q_k}
        {1 - \\Lambda^4\\cos^4(q_k/2)} (dq_k)^2

    Parameters
    ----------
    cfg : RingConfig
        Ring parameters with ``|Lambda| < 1``.

    Returns
    -------
    MetricTensor
        The 2 x 2 metric over axes ``("h", "gamma")``.

    Raises
    ------
    StructuralInputError
        If ``|Lambda| = 1``.
    SingularMomentumError
        If the dispersion vanishes at a momentum with ``sin phi != 0``.
    """
    lam = cfg.Lambda
    if abs(lam) >= 1.0:
        raise StructuralInputError(f"The ring metric needs |Lambda| < 1, found {lam}.")
    angles = momentum_angles(cfg)
    _check_gapless(angles)
    c2 = (lam * np.cos(0.5 * angles.q)) ** 2
    weight = 0.5 * lam**2 * (1.0 - c2 * np.cos(angles.q)) / (1.0 - c2**2)
    dq = np.stack([angles.dq_dh, angles.dq_dgamma])
    g = (dq * weight) @ dq.T
    return MetricTensor(params=("h", "gamma"), g=g)
