"""Steady-state and parameter-derivative Sylvester equations.

The steady correlation matrix solves

.. math::

    X C + C X^T = Y,

and its derivative along a parameter :math:`\\lambda_\\mu` solves

.. math::

    X (\\partial_\\mu C) + (\\partial_\\mu C) X^T
    = \\partial_\\mu Y - (\\partial_\\mu X) C - C (\\partial_\\mu X)^T.

Both are solved by a complex Schur factorization :math:`X = Z T Z^\\dagger`, after which
the equation reads :math:`T \\tilde C + \\tilde C T^\\dagger = Z^\\dagger Y Z` and is
eliminated entry by entry from the bottom-right corner. The factorization is shared by
the steady and all derivative solves at one parameter point.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numba as nb
import numpy as np
import scipy.linalg as spla

from ness_geometry.errors import (
    ConvergenceError,
    NonUniqueSteadyStateError,
    SizeCapError,
    StructuralInputError,
)
from ness_geometry.gaussian.states import CorrelationMatrix
from ness_geometry.lindblad.shape import (
    MARGINAL_ATOL,
    GapReport,
    StructureDerivative,
    StructureMatrices,
    gap,
)

__all__ = [
    "RESIDUAL_RTOL",
    "PHYSICAL_NORM_ATOL",
    "VECTORIZED_MAX_MODES",
    "SchurFactor",
    "SylvesterSolution",
    "DerivativeSet",
    "schur_factor",
    "solve_steady",
    "solve_derivatives",
    "solve_steady_vectorized",
    "sylvester_residual",
]

logger = logging.getLogger(__name__)

RESIDUAL_RTOL = 1e-8
PHYSICAL_NORM_ATOL = 1e-8
VECTORIZED_MAX_MODES = 32


@nb.jit(nopython=True, nogil=True)
def _triangular_lyapunov(t: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Solve ``T Z + Z T^dagger = F`` for upper triangular complex T.

    Parameters
    ----------
    t : np.ndarray
        Upper triangular complex matrix.
    f : np.ndarray
        Complex right-hand side.

    Returns
    -------
    np.ndarray
        The solution Z.
    """
    size = t.shape[0]
    out = np.zeros_like(f)
    for i in range(size - 1, -1, -1):
        for j in range(size - 1, -1, -1):
            acc = f[i, j]
            for k in range(i + 1, size):
                acc -= t[i, k] * out[k, j]
            for k in range(j + 1, size):
                acc -= out[i, k] * np.conj(t[j, k])
            out[i, j] = acc / (t[i, i] + np.conj(t[j, j]))
    return out


@dataclass(frozen=True, eq=False)
class SchurFactor:
    """Complex Schur factorization ``X = Z T Z^dagger`` of a real matrix."""

    T: np.ndarray
    Z: np.ndarray

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve ``X A + A X^T = rhs`` with the stored factorization.

        Parameters
        ----------
        rhs : np.ndarray
            Right-hand side.

        Returns
        -------
        np.ndarray
            The solution A.
        """
        z = self.Z
        f = np.ascontiguousarray(z.conj().T @ rhs @ z, dtype=np.complex128)
        return z @ _triangular_lyapunov(self.T, f) @ z.conj().T


@dataclass(frozen=True, eq=False)
class SylvesterSolution:
    """Certified steady-state correlation matrix."""

    C: CorrelationMatrix
    residual: float
    method_tag: str
    factor: Optional[SchurFactor] = None


@dataclass(frozen=True, eq=False)
class DerivativeSet:
    """Per-axis derivatives of the steady correlation matrix."""

    axes: Tuple[str, ...]
    dC: Tuple[np.ndarray, ...]
    residuals: Tuple[float, ...]

    def __len__(self) -> int:
        """Return the number of axes."""
        return len(self.axes)


def schur_factor(X: np.ndarray) -> SchurFactor:
    """Factorize X for repeated Sylvester solves."""
    t, z = spla.schur(np.asarray(X, dtype=complex), output="complex")
    return SchurFactor(T=np.ascontiguousarray(t), Z=z)


def sylvester_residual(X: np.ndarray, A: np.ndarray, rhs: np.ndarray) -> float:
    """Frobenius norm of ``X A + A X^T - rhs``."""
    return float(np.linalg.norm(X @ A + A @ X.T - rhs))


def _antisymmetrize(a: np.ndarray) -> np.ndarray:
    a = 0.5 * (a - a.T)
    return 0.5 * (a + a.conj().T)


def _certify(residual: float, rhs: np.ndarray, what: str) -> None:
    tolerance = RESIDUAL_RTOL * max(1.0, float(np.linalg.norm(rhs)))
    if residual > tolerance:
        raise ConvergenceError(f"{what} failed certification", residual, tolerance)
    logger.debug("%s residual %.3e (tolerance %.3e)", what, residual, tolerance)


def _require_gap(S: StructureMatrices, report: Optional[GapReport]) -> GapReport:
    report = gap(S) if report is None else report
    if report.delta <= 0.0:
        raise NonUniqueSteadyStateError(
            f"Steady state is not unique: gap {report.delta:.3e} (stable={report.stable})."
        )
    return report


def _wrap(C: np.ndarray, residual: float) -> CorrelationMatrix:
    norm = float(np.max(np.abs(spla.eigvalsh(C))))
    if norm > 1.0 + PHYSICAL_NORM_ATOL:
        raise ConvergenceError(
            "Steady correlation matrix is unphysical (spectral norm above 1)",
            norm - 1.0,
            PHYSICAL_NORM_ATOL,
        )
    return CorrelationMatrix.from_array(C, norm_atol=PHYSICAL_NORM_ATOL)


def solve_steady(
    S: StructureMatrices,
    report: Optional[GapReport] = None,
    factor: Optional[SchurFactor] = None,
) -> SylvesterSolution:
    """Solve ``X C + C X^T = Y`` by Schur elimination.

    Parameters
    ----------
    S : StructureMatrices
        Structure matrices of the model.
    report : GapReport, optional
        Precomputed gap report of `S`.
    factor : SchurFactor, optional
        Precomputed Schur factorization of ``S.X``.

    Returns
    -------
    SylvesterSolution
        The certified solution, carrying the factorization for derivative solves.

    Raises
    ------
    NonUniqueSteadyStateError
        If the gap vanishes.
    ConvergenceError
        If the residual or the physicality check fails.
    """
    _require_gap(S, report)
    factor = schur_factor(S.X) if factor is None else factor
    c = _antisymmetrize(factor.solve(S.Y))
    residual = sylvester_residual(S.X, c, S.Y)
    _certify(residual, S.Y, "Steady-state Sylvester solve")
    return SylvesterSolution(_wrap(c, residual), residual, "schur_elimination", factor)


def solve_derivatives(
    S: StructureMatrices,
    dS: Sequence[StructureDerivative],
    C: CorrelationMatrix,
    factor: Optional[SchurFactor] = None,
) -> DerivativeSet:
    """Solve the derivative Sylvester equation along each parameter axis.

    Parameters
    ----------
    S : StructureMatrices
        Structure matrices at the parameter point.
    dS : Sequence[StructureDerivative]
        Per-axis derivatives of X and Y.
    C : CorrelationMatrix
        Certified steady correlation matrix at the point.
    factor : SchurFactor, optional
        Schur factorization of ``S.X``, shared by all axes.

    Returns
    -------
    DerivativeSet
        Certified derivatives, one per axis.

    Raises
    ------
    StructuralInputError
        If a derivative has the wrong shape.
    """
    if factor is None:
        _require_gap(S, None)
        factor = schur_factor(S.X)
    c = C.data
    derivatives, residuals = [], []
    for item in dS:
        if item.dX.shape != S.X.shape or item.dY.shape != S.Y.shape:
            raise StructuralInputError(
                f"Derivative along '{item.axis}' has shape {item.dX.shape}, "
                f"expected {S.X.shape}."
            )
        rhs = item.dY - item.dX @ c - c @ item.dX.T
        dc = _antisymmetrize(factor.solve(rhs))
        residual = sylvester_residual(S.X, dc, rhs)
        _certify(residual, rhs, f"Derivative solve along '{item.axis}'")
        dc.setflags(write=False)
        derivatives.append(dc)
        residuals.append(residual)
    return DerivativeSet(
        axes=tuple(item.axis for item in dS),
        dC=tuple(derivatives),
        residuals=tuple(residuals),
    )


def solve_steady_vectorized(S: StructureMatrices) -> SylvesterSolution:
    """Solve the steady state through the Kronecker form ``X-hat vec(C) = vec(Y)``.

    Parameters
    ----------
    S : StructureMatrices
        Structure matrices with at most `VECTORIZED_MAX_MODES` modes.

    Returns
    -------
    SylvesterSolution
        The certified solution.

    Raises
    ------
    SizeCapError
        Above the mode cap.
    NonUniqueSteadyStateError
        If X-hat is singular.
    """
    if S.n > VECTORIZED_MAX_MODES:
        raise SizeCapError(
            f"Kronecker solve is capped at n = {VECTORIZED_MAX_MODES}, found {S.n}."
        )
    x = np.linalg.eigvals(S.X)
    delta_xhat = float(np.min(np.abs(np.add.outer(x, x))))
    if delta_xhat < MARGINAL_ATOL:
        raise NonUniqueSteadyStateError(
            f"X-hat is singular: min|x_i + x_j| = {delta_xhat:.3e}."
        )
    size = S.X.shape[0]
    eye = np.eye(size)
    xhat = np.kron(S.X, eye) + np.kron(eye, S.X)
    try:
        vec = np.linalg.solve(xhat, S.Y.reshape(-1))
    except np.linalg.LinAlgError as err:
        raise NonUniqueSteadyStateError("X-hat is singular.") from err
    c = _antisymmetrize(vec.reshape(size, size))
    residual = sylvester_residual(S.X, c, S.Y)
    _certify(residual, S.Y, "Kronecker Sylvester solve")
    return SylvesterSolution(_wrap(c, residual), residual, "kron_vectorized")
