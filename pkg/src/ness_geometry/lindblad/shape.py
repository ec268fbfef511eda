"""Structure matrices, spectrum and gap of a quadratic fermionic Lindbladian.

The master equation

.. math::

    \\dot\\rho = -i[H, \\rho] + \\sum_\\mu (2 L_\\mu \\rho L_\\mu^\\dagger
    - \\{L_\\mu^\\dagger L_\\mu, \\rho\\})

with :math:`H = \\sum_{ij} H_{ij} w_i w_j` and :math:`L_\\mu = \\sum_i \\ell_{\\mu i} w_i`
closes on the correlation matrix through

.. math::

    M = \\ell^T \\ell^*, \\qquad X = 4(iH + \\mathrm{Re}\\,M), \\qquad
    Y = -8i\\,\\mathrm{Im}\\,M.

The Liouvillean spectrum is :math:`-\\{\\sum_j x_j n_j\\}` over occupations
:math:`n_j \\in \\{0, 1\\}` of the 2n eigenvalues :math:`x_j` of X.
"""

import itertools
import logging
from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np
import scipy.linalg as spla

from ness_geometry.errors import SizeCapError, StabilityError, StructuralInputError

__all__ = [
    "STABILITY_ATOL",
    "MARGINAL_ATOL",
    "DIAGONALIZABLE_COND",
    "SPECTRUM_BUDGET",
    "QuadraticLindbladian",
    "StructureMatrices",
    "StructureDerivative",
    "GapReport",
    "Prop1Report",
    "build_structure",
    "gap",
    "liouvillean_spectrum",
    "liouvillean_gap",
    "prop1_check",
    "xhat_matrix",
    "xhat_inverse_norm",
]

logger = logging.getLogger(__name__)

STABILITY_ATOL = 1e-10
MARGINAL_ATOL = 1e-12
DIAGONALIZABLE_COND = 1e8
SPECTRUM_BUDGET = 2_000_000
_STRUCTURE_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class QuadraticLindbladian:
    """A quadratic Hamiltonian and linear Lindblad operators in the Majorana basis.

    Attributes
    ----------
    hamiltonian : np.ndarray
        2n x 2n purely imaginary antisymmetric matrix H.
    lindblad : np.ndarray
        m x 2n complex matrix of Lindblad coefficients, one row per operator.
    """

    hamiltonian: np.ndarray
    lindblad: np.ndarray

    def __post_init__(self) -> None:
        """Validate shapes and the Hermiticity of the quadratic form."""
        h = np.asarray(self.hamiltonian, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] % 2:
            raise StructuralInputError(
                f"Hamiltonian must be 2n x 2n, found shape {h.shape}."
            )
        scale = max(1.0, float(np.max(np.abs(h), initial=0.0)))
        violation = max(
            float(np.max(np.abs(h + h.T), initial=0.0)),
            float(np.max(np.abs(np.real(h)), initial=0.0)),
        )
        if violation > _STRUCTURE_ATOL * scale:
            raise StructuralInputError(
                "Hamiltonian must be purely imaginary antisymmetric (iH real "
                f"antisymmetric), found violation {violation:.3e}."
            )
        h = 0.5j * (np.imag(h) - np.imag(h).T)
        ell = np.asarray(self.lindblad, dtype=complex)
        if ell.ndim == 1:
            ell = ell.reshape(1, -1) if ell.size else np.zeros((0, h.shape[0]))
        if ell.shape[1] != h.shape[0]:
            raise StructuralInputError(
                f"Lindblad coefficients need {h.shape[0]} columns, found {ell.shape[1]}."
            )
        h.setflags(write=False)
        ell.setflags(write=False)
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "lindblad", ell)

    @property
    def n(self) -> int:
        """Number of fermionic modes."""
        return self.hamiltonian.shape[0] // 2


@dataclass(frozen=True, eq=False)
class StructureMatrices:
    """The matrices X, Y and M of a quadratic Lindbladian."""

    X: np.ndarray
    Y: np.ndarray
    M: np.ndarray

    @property
    def n(self) -> int:
        """Number of fermionic modes."""
        return self.X.shape[0] // 2


@dataclass(frozen=True, eq=False)
class StructureDerivative:
    """Derivatives of X and Y along one named parameter axis."""

    axis: str
    dX: np.ndarray
    dY: np.ndarray


@dataclass(frozen=True)
class GapReport:
    """Spectrum of X and the gap derived from it.

    Attributes
    ----------
    delta : float
        Twice the smallest real part of the x-spectrum, 0 when marginal or unstable.
    x_spectrum : np.ndarray
        Eigenvalues of X sorted by real part, then imaginary part.
    stable : bool
        All real parts exceed ``-STABILITY_ATOL``.
    diagonalizable_hint : bool
        Condition number of the eigenvector matrix below `DIAGONALIZABLE_COND`.
    eigvec_condition : float
        That condition number.
    """

    delta: float
    x_spectrum: np.ndarray
    stable: bool
    diagonalizable_hint: bool
    eigvec_condition: float


@dataclass(frozen=True)
class Prop1Report:
    """The three equivalent characterizations of the gap and their spread."""

    delta: float
    delta_l: float
    delta_xhat: float
    max_discrepancy: float


def build_structure(model: QuadraticLindbladian) -> StructureMatrices:
    """Assemble X, Y and M from a quadratic Lindbladian.

    Parameters
    ----------
    model : QuadraticLindbladian
        The model at one parameter point.

    Returns
    -------
    StructureMatrices
        ``M = sum_mu l_mu l_mu^dagger`` (as ``M_ij = sum l_mi l*_mj``),
        ``X = 4(iH + Re M)`` and ``Y = -8i Im M``.
    """
    ell = model.lindblad
    m = ell.T @ ell.conj()
    m = 0.5 * (m + m.conj().T)
    x = np.real(4.0 * (1j * model.hamiltonian + np.real(m)))
    im = np.imag(m)
    y = -8j * 0.5 * (im - im.T)
    return StructureMatrices(X=x, Y=y, M=m)


def _sorted_eig(X: np.ndarray):
    x, vecs = spla.eig(X)
    order = np.lexsort((np.imag(x), np.real(x)))
    return x[order], vecs[:, order]


def gap(S: StructureMatrices) -> GapReport:
    """Compute the x-spectrum and the gap ``delta = 2 min Re x``.

    Eigenvalues are obtained with a general eigensolver, so a defective X still
    yields its spectrum; only the diagonalizability hint is affected.

    Parameters
    ----------
    S : StructureMatrices
        Structure matrices of the model.

    Returns
    -------
    GapReport
        The gap report.
    """
    x, vecs = _sorted_eig(S.X)
    cond = float(np.linalg.cond(vecs)) if x.size else 1.0
    min_re = float(np.min(np.real(x)))
    stable = min_re >= -STABILITY_ATOL
    delta = 2.0 * min_re if stable and min_re >= MARGINAL_ATOL else 0.0
    if not stable:
        logger.warning("X has eigenvalue with real part %.3e < 0.", min_re)
    elif delta == 0.0:
        logger.warning("Marginal gap: min Re x = %.3e.", min_re)
    return GapReport(
        delta=delta,
        x_spectrum=x,
        stable=stable,
        diagonalizable_hint=cond < DIAGONALIZABLE_COND,
        eigvec_condition=cond,
    )


def liouvillean_spectrum(
    S: StructureMatrices, max_excitations: int = 2, parity: Optional[str] = None
) -> np.ndarray:
    """Enumerate Liouvillean eigenvalues ``-sum_j x_j n_j``.

    Parameters
    ----------
    S : StructureMatrices
        Structure matrices of the model.
    max_excitations : int
        Largest number of occupied x-modes in a pattern. Defaults to 2.
    parity : str, optional
        ``"even"`` or ``"odd"`` restricts to patterns with that number of
        excitations; None keeps all.

    Returns
    -------
    np.ndarray
        Eigenvalues, starting with 0 for the empty pattern.

    Raises
    ------
    SizeCapError
        If the number of patterns exceeds `SPECTRUM_BUDGET`.
    StructuralInputError
        If `parity` is not recognized.
    """
    if parity not in (None, "even", "odd"):
        raise StructuralInputError(
            f"parity must be 'even', 'odd' or None, found {parity}."
        )
    x = np.linalg.eigvals(S.X)
    modes = x.size
    top = min(max_excitations, modes)
    orders = [
        k
        for k in range(top + 1)
        if parity is None or (k % 2 == 0) == (parity == "even")
    ]
    total = sum(comb(modes, k) for k in orders)
    if total > SPECTRUM_BUDGET:
        raise SizeCapError(
            f"Spectrum enumeration needs {total} patterns, cap is {SPECTRUM_BUDGET}."
        )
    values = []
    for k in orders:
        if k == 0:
            values.append(np.zeros(1, dtype=complex))
            continue
        idx = np.array(list(itertools.combinations(range(modes), k)))
        values.append(-x[idx].sum(axis=1))
    return np.concatenate(values) if values else np.zeros(0, dtype=complex)


def liouvillean_gap(S: StructureMatrices, max_excitations: int = 2) -> float:
    """Smallest ``|sum_j x_j n_j|`` over nonzero parity-even patterns.

    Physical density operators are parity even, so the relaxation gap is read from
    the even sector.

    Parameters
    ----------
    S : StructureMatrices
        Structure matrices of the model.
    max_excitations : int
        Largest pattern size, at least 2. Defaults to 2.

    Returns
    -------
    float
        The enumerated gap.
    """
    if max_excitations < 2:
        raise StructuralInputError("The even-sector gap needs max_excitations >= 2.")
    spectrum = liouvillean_spectrum(S, max_excitations, parity="even")
    return float(np.min(np.abs(spectrum[1:])))


def prop1_check(S: StructureMatrices) -> Prop1Report:
    """Compare the gap from Re x, from the Liouvillean spectrum and from X-hat.

    Parameters
    ----------
    S : StructureMatrices
        Structure matrices of a stable model.

    Returns
    -------
    Prop1Report
        The three gaps and their largest pairwise difference.

    Raises
    ------
    StabilityError
        If X has an eigenvalue with negative real part.
    """
    report = gap(S)
    if not report.stable:
        raise StabilityError("prop1_check requires a stable X.")
    if not report.diagonalizable_hint:
        logger.warning(
            "X is close to defective (cond %.3e); equality is not guaranteed.",
            report.eigvec_condition,
        )
    x = report.x_spectrum
    delta = 2.0 * float(np.min(np.real(x)))
    delta_l = liouvillean_gap(S)
    delta_xhat = float(np.min(np.abs(np.add.outer(x, x))))
    values = (delta, delta_l, delta_xhat)
    spread = max(abs(a - b) for a, b in itertools.combinations(values, 2))
    return Prop1Report(delta, delta_l, delta_xhat, spread)


def xhat_matrix(S: StructureMatrices) -> np.ndarray:
    """Kronecker-sum operator ``X (x) 1 + 1 (x) X`` acting on row-major vec(C)."""
    eye = np.eye(S.X.shape[0])
    return np.kron(S.X, eye) + np.kron(eye, S.X)


def xhat_inverse_norm(S: StructureMatrices) -> float:
    """Spectral norm of the inverse of X-hat, assembled from the eigenpairs of X.

    Parameters
    ----------
    S : StructureMatrices
        Structure matrices with diagonalizable X.

    Returns
    -------
    float
        ``|X-hat^{-1}|``; equals ``1/min|x_i + x_j|`` when X is normal.
    """
    x, vecs = spla.eig(S.X)
    pair = np.add.outer(x, x).ravel()
    if np.min(np.abs(pair)) == 0.0:
        return float("inf")
    basis = np.kron(vecs, vecs)
    inverse = (basis / pair) @ np.linalg.inv(basis)
    return float(np.linalg.norm(inverse, 2))
