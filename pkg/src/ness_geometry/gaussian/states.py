"""Gaussian fermionic states in the Majorana correlation, exponent and Cayley forms.

With Majorana operators :math:`w_\\ell = f_\\ell + f_\\ell^\\dagger` and
:math:`w_{n+\\ell} = i(f_\\ell - f_\\ell^\\dagger)`, a Gaussian state

.. math::

    \\rho = \\frac{1}{Z} \\exp\\left(-\\frac{i}{4} \\sum_{ij} G_{ij} w_i w_j\\right)

is fixed by its correlation matrix :math:`C_{ij} = \\frac{1}{2}\\langle [w_i, w_j]
\\rangle`. `G` is real antisymmetric, :math:`iG` is Hermitian and

.. math::

    C = \\tanh(iG/2), \\qquad T = e^{iG} = (1 + C)(1 - C)^{-1}.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg as spla

from ness_geometry.errors import PureDirectionError, StructuralInputError

__all__ = [
    "SYMMETRY_ATOL",
    "hermitian_antisymmetric_part",
    "NORM_ATOL",
    "PURE_DIRECTION_MARGIN",
    "CorrelationMatrix",
    "GMatrix",
    "TMatrix",
    "correlation_from_G",
    "G_from_correlation",
    "t_from_correlation",
    "correlation_from_t",
    "purity",
]

SYMMETRY_ATOL = 1e-10
NORM_ATOL = 1e-10
PURE_DIRECTION_MARGIN = 1e-8
_CAYLEY_ATOL = 1e-8


def _check_square_even(data: np.ndarray, name: str) -> None:
    if data.ndim != 2 or data.shape[0] != data.shape[1]:
        raise StructuralInputError(
            f"{name} must be a square matrix, found {data.shape}."
        )
    if data.shape[0] == 0 or data.shape[0] % 2:
        raise StructuralInputError(
            f"{name} must have positive even dimension 2n, found {data.shape[0]}."
        )


def hermitian_antisymmetric_part(
    data: np.ndarray, name: str = "matrix", atol: float = SYMMETRY_ATOL
) -> np.ndarray:
    """Project onto Hermitian transpose-antisymmetric matrices.

    Parameters
    ----------
    data : np.ndarray
        Square matrix expected to satisfy ``A = A^dagger = -A^T``.
    name : str
        Name used in error messages.
    atol : float
        Largest violation that is symmetrized away, relative to ``max(1, |A|_max)``.

    Returns
    -------
    np.ndarray
        Purely imaginary antisymmetric matrix.

    Raises
    ------
    StructuralInputError
        If the violation exceeds `atol`.
    """
    data = np.asarray(data, dtype=complex)
    _check_square_even(data, name)
    scale = max(1.0, float(np.max(np.abs(data))))
    violation = max(
        float(np.max(np.abs(data - data.conj().T))),
        float(np.max(np.abs(data + data.T))),
    )
    if violation > atol * scale:
        raise StructuralInputError(
            f"{name} must be Hermitian and antisymmetric, found violation {violation:.3e}."
        )
    hermitian = 0.5 * (data + data.conj().T)
    return 0.5 * (hermitian - hermitian.T)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Majorana correlation matrix of a Gaussian state.

    Use `CorrelationMatrix.from_array` to build validated instances.

    Attributes
    ----------
    data : np.ndarray
        The 2n x 2n purely imaginary antisymmetric matrix C.
    """

    data: np.ndarray

    @classmethod
    def from_array(
        cls, data: np.ndarray, norm_atol: float = NORM_ATOL
    ) -> "CorrelationMatrix":
        """Validate, symmetrize and wrap a correlation matrix.

        Parameters
        ----------
        data : np.ndarray
            Candidate matrix C.
        norm_atol : float
            Allowed excess of the spectral norm over 1.

        Returns
        -------
        CorrelationMatrix
            The validated correlation matrix.

        Raises
        ------
        StructuralInputError
            If C is not Hermitian antisymmetric or its spectral norm exceeds 1.
        """
        clean = hermitian_antisymmetric_part(data, "correlation matrix")
        norm = float(np.max(np.abs(spla.eigvalsh(clean))))
        if norm > 1.0 + norm_atol:
            raise StructuralInputError(
                f"Correlation matrix spectral norm must be <= 1, found {norm:.12f}."
            )
        clean.setflags(write=False)
        return cls(clean)

    @classmethod
    def zeros(cls, n: int) -> "CorrelationMatrix":
        """Return the correlation matrix of the maximally mixed state of n modes."""
        return cls.from_array(np.zeros((2 * n, 2 * n), dtype=complex))

    @property
    def n(self) -> int:
        """Number of fermionic modes."""
        return self.data.shape[0] // 2

    def eigh(self) -> Tuple[np.ndarray, np.ndarray]:
        """Eigendecomposition of the Hermitian matrix C.

        Eigenvalues outside [-1, 1] by less than `NORM_ATOL` are clipped.

        Returns
        -------
        Tuple[np.ndarray, np.ndarray]
            Ascending eigenvalues and the unitary matrix of eigenvectors.

        Raises
        ------
        StructuralInputError
            If an eigenvalue lies further than `NORM_ATOL` outside [-1, 1].
        """
        c, vecs = spla.eigh(self.data)
        excess = float(np.max(np.abs(c), initial=0.0)) - 1.0
        if excess > NORM_ATOL:
            raise StructuralInputError(
                f"Correlation eigenvalue outside [-1, 1] by {excess:.3e}."
            )
        return np.clip(c, -1.0, 1.0), vecs

    def spectral_norm(self) -> float:
        """Return the operator norm of C."""
        return float(np.max(np.abs(self.eigh()[0])))


@dataclass(frozen=True, eq=False)
class GMatrix:
    """Exponent of the Gaussian ansatz.

    `data` is the real antisymmetric G; the Hermitian generator is ``iG``.
    """

    data: np.ndarray

    @classmethod
    def from_array(cls, data: np.ndarray) -> "GMatrix":
        """Validate and wrap a real antisymmetric exponent matrix.

        Parameters
        ----------
        data : np.ndarray
            Candidate G. A vanishing imaginary part is tolerated.

        Returns
        -------
        GMatrix
            The validated exponent.

        Raises
        ------
        StructuralInputError
            If G is not real antisymmetric.
        """
        data = np.asarray(data)
        _check_square_even(data, "G")
        scale = max(1.0, float(np.max(np.abs(data))))
        imag = float(np.max(np.abs(np.imag(data))))
        asym = float(np.max(np.abs(data + data.T)))
        if max(imag, asym) > SYMMETRY_ATOL * scale:
            raise StructuralInputError(
                f"G must be real antisymmetric, found violation {max(imag, asym):.3e}."
            )
        real = np.real(data).astype(float)
        clean = 0.5 * (real - real.T)
        clean.setflags(write=False)
        return cls(clean)

    @property
    def n(self) -> int:
        """Number of fermionic modes."""
        return self.data.shape[0] // 2

    @property
    def generator(self) -> np.ndarray:
        """Hermitian matrix iG with eigenvalue pairs ±g_k."""
        return 1j * self.data


@dataclass(frozen=True, eq=False)
class TMatrix:
    """Cayley form ``T = exp(iG)`` of a mixed Gaussian state."""

    data: np.ndarray

    @classmethod
    def from_array(cls, data: np.ndarray) -> "TMatrix":
        """Validate and wrap a T matrix.

        Parameters
        ----------
        data : np.ndarray
            Candidate T, Hermitian with ``T^T T = 1`` and positive spectrum.

        Returns
        -------
        TMatrix
            The validated matrix.

        Raises
        ------
        StructuralInputError
            If an invariant is violated.
        """
        data = np.asarray(data, dtype=complex)
        _check_square_even(data, "T")
        scale = max(1.0, float(np.max(np.abs(data))))
        if np.max(np.abs(data - data.conj().T)) > SYMMETRY_ATOL * scale:
            raise StructuralInputError("T must be Hermitian.")
        clean = 0.5 * (data + data.conj().T)
        t = spla.eigvalsh(clean)
        if np.min(t) <= 0:
            raise StructuralInputError(
                f"T must be positive definite, found eigenvalue {np.min(t):.3e}."
            )
        orth = np.max(np.abs(clean.T @ clean - np.eye(clean.shape[0])))
        if orth > _CAYLEY_ATOL * scale**2:
            raise StructuralInputError(f"T must satisfy T^T T = 1, off by {orth:.3e}.")
        clean.setflags(write=False)
        return cls(clean)

    @property
    def n(self) -> int:
        """Number of fermionic modes."""
        return self.data.shape[0] // 2


def _from_eigen(values: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    return (vecs * values) @ vecs.conj().T


def _require_mixed(c: np.ndarray, what: str) -> None:
    worst = float(np.max(np.abs(c)))
    if worst >= 1.0 - PURE_DIRECTION_MARGIN:
        raise PureDirectionError(
            f"{what} needs a mixed state, found correlation eigenvalue {worst:.12f}."
        )


def correlation_from_G(G: GMatrix) -> CorrelationMatrix:
    """Correlation matrix ``C = tanh(iG/2)`` of the Gaussian ansatz.

    Parameters
    ----------
    G : GMatrix
        Exponent of the ansatz.

    Returns
    -------
    CorrelationMatrix
        Correlation matrix with eigenvalues ``tanh(g_k/2)``.
    """
    g, vecs = spla.eigh(G.generator)
    return CorrelationMatrix.from_array(_from_eigen(np.tanh(0.5 * g), vecs))


def G_from_correlation(C: CorrelationMatrix) -> GMatrix:  # noqa: N802
    """Invert ``C = tanh(iG/2)``.

    Parameters
    ----------
    C : CorrelationMatrix
        Correlation matrix of a full-rank state.

    Returns
    -------
    GMatrix
        The exponent G.
    """
    c, vecs = C.eigh()
    _require_mixed(c, "The exponent G")
    generator = _from_eigen(2.0 * np.arctanh(c), vecs)
    return GMatrix.from_array(-1j * generator)


def t_from_correlation(C: CorrelationMatrix) -> TMatrix:
    """Cayley map ``T = (1 + C)(1 - C)^{-1}``.

    Parameters
    ----------
    C : CorrelationMatrix
        Correlation matrix of a full-rank state.

    Returns
    -------
    TMatrix
        T sharing the eigenvectors of C, with eigenvalues ``(1 + c)/(1 - c)``.
    """
    c, vecs = C.eigh()
    _require_mixed(c, "The Cayley matrix T")
    return TMatrix.from_array(_from_eigen((1.0 + c) / (1.0 - c), vecs))


def correlation_from_t(T: TMatrix) -> CorrelationMatrix:
    """Inverse Cayley map ``C = (T - 1)/(T + 1)``."""
    t, vecs = spla.eigh(T.data)
    return CorrelationMatrix.from_array(_from_eigen((t - 1.0) / (t + 1.0), vecs))


def purity(C: CorrelationMatrix) -> float:
    """Return ``Tr(rho^2) = sqrt(det((1 + C^2)/2))``.

    Parameters
    ----------
    C : CorrelationMatrix
        Correlation matrix of the state.

    Returns
    -------
    float
        The purity, in (0, 1].
    """
    c, _ = C.eigh()
    return float(np.exp(0.5 * np.sum(np.log(0.5 * (1.0 + c**2)))))
