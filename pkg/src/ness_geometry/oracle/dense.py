"""Dense Liouvilleans and density matrices on the full 2^n-dimensional Hilbert space.

Operators are vectorized row-major, so that ``vec(A rho B) = (A kron B^T) vec(rho)``.
Majoranas are built with the Jordan-Wigner convention ``w_l = S_l sigma^x_l`` and
``w_{n+l} = -S_l sigma^y_l`` with ``S_l = prod_{k<l} sigma^z_k``; site 1 is the leftmost
Kronecker factor.
"""

import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import List, Sequence

import numpy as np
import scipy.linalg as spla

from ness_geometry.errors import (
    NonUniqueSteadyStateError,
    SizeCapError,
    StructuralInputError,
)
from ness_geometry.gaussian.states import CorrelationMatrix, GMatrix
from ness_geometry.lindblad.shape import QuadraticLindbladian, build_structure
from ness_geometry.models.xy_chain import HAMILTONIAN_SCALE, XYBoundaryConfig

__all__ = [
    "DENSE_MAX_MODES",
    "CAR_MAX_MODES",
    "KERNEL_GAP_ATOL",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "DenseLiouvillean",
    "DenseState",
    "CARReport",
    "site_operator",
    "majorana_operators",
    "dense_liouvillean_from_operators",
    "dense_liouvillean",
    "spin_liouvillean_xy",
    "steady_state_dense",
    "correlations_dense",
    "gaussian_state_dense",
    "gaussian_state_from_exponent",
    "uhlmann_fidelity_dense",
    "trace_preservation_violation",
    "car_superoperators",
    "car_superoperator_check",
    "quadratic_form_check",
]

logger = logging.getLogger(__name__)

DENSE_MAX_MODES = 4
CAR_MAX_MODES = 3
KERNEL_GAP_ATOL = 1e-10
_STATE_ATOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()


def _check_cap(n: int, cap: int = DENSE_MAX_MODES) -> None:
    if n > cap:
        raise SizeCapError(f"Dense computations are capped at n = {cap}, found {n}.")


@dataclass(frozen=True, eq=False)
class DenseLiouvillean:
    """Superoperator matrix of a master equation on the ``4^n``-dim operator space."""

    n: int
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        """Hilbert-space dimension ``2^n``."""
        return 2**self.n

    def eigenvalues(self) -> np.ndarray:
        """Return all eigenvalues of the superoperator."""
        return spla.eigvals(self.matrix)


@dataclass(frozen=True, eq=False)
class DenseState:
    """A density matrix; use `DenseState.from_array` to validate."""

    rho: np.ndarray

    @classmethod
    def from_array(cls, rho: np.ndarray, atol: float = _STATE_ATOL) -> "DenseState":
        """Validate Hermiticity, unit trace and positivity of `rho`.

        Parameters
        ----------
        rho : np.ndarray
            Candidate density matrix.
        atol : float
            Tolerance of every check.

        Returns
        -------
        DenseState
            The Hermitized state.

        Raises
        ------
        StructuralInputError
            If a check fails.
        """
        rho = np.asarray(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise StructuralInputError(
                f"Density matrix must be square, found {rho.shape}."
            )
        if np.max(np.abs(rho - rho.conj().T)) > atol:
            raise StructuralInputError("Density matrix must be Hermitian.")
        rho = 0.5 * (rho + rho.conj().T)
        trace = float(np.real(np.trace(rho)))
        if abs(trace - 1.0) > atol:
            raise StructuralInputError(
                f"Density matrix must have unit trace, found {trace}."
            )
        lowest = float(spla.eigvalsh(rho)[0])
        if lowest < -atol:
            raise StructuralInputError(
                f"Density matrix has negative eigenvalue {lowest:.3e}."
            )
        rho.setflags(write=False)
        return cls(rho)

    @property
    def n(self) -> int:
        """Number of sites."""
        return int(round(math.log2(self.rho.shape[0])))

    def expectation(self, op: np.ndarray) -> complex:
        """Return ``Tr(rho op)``."""
        return complex(np.trace(self.rho @ op))

    def purity(self) -> float:
        """Return ``Tr(rho^2)``."""
        return float(np.real(np.trace(self.rho @ self.rho)))


@dataclass(frozen=True)
class CARReport:
    """Largest violations of the superoperator algebra."""

    n: int
    max_car_violation: float
    max_anticommutator: float
    vacuum_violation: float


def site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """Embed a single-site operator at zero-based `site` of an n-site chain."""
    factors = [np.eye(2, dtype=complex)] * n
    factors[site] = op
    return reduce(np.kron, factors)


def majorana_operators(n: int) -> List[np.ndarray]:
    """Return the 2n Majorana matrices ``w_1..w_{2n}`` on ``2^n`` dimensions."""
    _check_cap(n)
    first, second = [], []
    for site in range(n):
        identity = [np.eye(2, dtype=complex)] * (n - site - 1)
        factors = [SIGMA_Z] * site + [SIGMA_X] + identity
        first.append(reduce(np.kron, factors))
        factors[site] = -SIGMA_Y
        second.append(reduce(np.kron, factors))
    return first + second


def dense_liouvillean_from_operators(
    hamiltonian: np.ndarray, jumps: Sequence[np.ndarray]
) -> np.ndarray:
    """Superoperator of ``-i[H, rho] + sum(2 L rho L^dagger - {L^dagger L, rho})``."""
    dim = hamiltonian.shape[0]
    eye = np.eye(dim)
    out = -1j * (np.kron(hamiltonian, eye) - np.kron(eye, hamiltonian.T))
    for L in jumps:
        ldl = L.conj().T @ L
        out = out + 2.0 * np.kron(L, L.conj()) - np.kron(ldl, eye) - np.kron(eye, ldl.T)
    return out


def dense_liouvillean(model: QuadraticLindbladian) -> DenseLiouvillean:
    """Dense superoperator of a quadratic Lindbladian.

    Parameters
    ----------
    model : QuadraticLindbladian
        Model with at most `DENSE_MAX_MODES` modes.

    Returns
    -------
    DenseLiouvillean
        The ``4^n x 4^n`` matrix.
    """
    n = model.n
    _check_cap(n)
    w = np.array(majorana_operators(n))
    hamiltonian = np.einsum("ij,iab,jbc->ac", model.hamiltonian, w, w)
    jumps = [np.tensordot(row, w, axes=1) for row in model.lindblad]
    return DenseLiouvillean(n, dense_liouvillean_from_operators(hamiltonian, jumps))


def spin_liouvillean_xy(cfg: XYBoundaryConfig) -> DenseLiouvillean:
    """Boundary-driven XY chain written directly with Pauli matrices.

    Parameters
    ----------
    cfg : XYBoundaryConfig
        Chain with at most `DENSE_MAX_MODES` sites.

    Returns
    -------
    DenseLiouvillean
        The superoperator, with the Hamiltonian scaled as in the Majorana builder.
    """
    n = cfg.n
    _check_cap(n)
    dim = 2**n
    hamiltonian = np.zeros((dim, dim), dtype=complex)
    for site in range(n - 1):
        xx = site_operator(SIGMA_X, site, n) @ site_operator(SIGMA_X, site + 1, n)
        yy = site_operator(SIGMA_Y, site, n) @ site_operator(SIGMA_Y, site + 1, n)
        hamiltonian += 0.5 * (1.0 + cfg.gamma) * xx + 0.5 * (1.0 - cfg.gamma) * yy
    for site in range(n):
        hamiltonian += cfg.h * site_operator(SIGMA_Z, site, n)
    jumps = [
        math.sqrt(cfg.gl_plus) * site_operator(SIGMA_PLUS, 0, n),
        math.sqrt(cfg.gl_minus) * site_operator(SIGMA_MINUS, 0, n),
        math.sqrt(cfg.gr_plus) * site_operator(SIGMA_PLUS, n - 1, n),
        math.sqrt(cfg.gr_minus) * site_operator(SIGMA_MINUS, n - 1, n),
    ]
    matrix = dense_liouvillean_from_operators(HAMILTONIAN_SCALE * hamiltonian, jumps)
    return DenseLiouvillean(n, matrix)


def steady_state_dense(L: DenseLiouvillean) -> DenseState:
    """Kernel of the superoperator by singular value decomposition.

    Parameters
    ----------
    L : DenseLiouvillean
        The superoperator.

    Returns
    -------
    DenseState
        Hermitized, trace-normalized steady state.

    Raises
    ------
    NonUniqueSteadyStateError
        If the second-smallest singular value is below `KERNEL_GAP_ATOL`.
    """
    _, s, vh = spla.svd(L.matrix)
    if s[-2] <= KERNEL_GAP_ATOL:
        raise NonUniqueSteadyStateError(
            f"Dense kernel is degenerate: second-smallest singular value {s[-2]:.3e}."
        )
    logger.debug("Dense kernel singular values %.3e, %.3e", s[-1], s[-2])
    rho = vh[-1].conj().reshape(L.dim, L.dim)
    rho = rho / np.trace(rho)
    return DenseState.from_array(0.5 * (rho + rho.conj().T), atol=1e-8)


def correlations_dense(state: DenseState) -> CorrelationMatrix:
    """Return ``C_ij = Tr(rho [w_i, w_j]) / 2``."""
    w = np.array(majorana_operators(state.n))
    rw = np.einsum("ab,ibc->iac", state.rho, w)
    # Tr(rho w_i w_j) for all pairs
    two_point = np.einsum("iac,jca->ij", rw, w)
    return CorrelationMatrix.from_array(0.5 * (two_point - two_point.T), norm_atol=1e-8)


def _pair_blocks(T: np.ndarray):
    size = T.shape[0]
    pairs, idle, i = [], [], 0
    while i < size:
        if i + 1 < size and abs(T[i + 1, i]) > 0:
            pairs.append((i, i + 1, T[i, i + 1]))
            i += 2
        else:
            idle.append(i)
            i += 1
    pairs.extend((p, q, 0.0) for p, q in zip(idle[0::2], idle[1::2]))
    return pairs


def gaussian_state_dense(C: CorrelationMatrix) -> DenseState:
    """Density matrix of the Gaussian state with correlations C, in product form.

    With ``-iC = O T O^T`` in real Schur form and rotated Majoranas
    ``w'_p = sum_j O_jp w_j``, the state is
    ``2^{-n} prod_b (1 - i lambda_b w'_p w'_q)``.

    Parameters
    ----------
    C : CorrelationMatrix
        Correlations of at most `DENSE_MAX_MODES` modes.

    Returns
    -------
    DenseState
        The density matrix.
    """
    n = C.n
    _check_cap(n)
    T, O = spla.schur(np.real(-1j * C.data), output="real")
    w = np.array(majorana_operators(n))
    rotated = np.tensordot(O.T, w, axes=1)
    dim = 2**n
    rho = np.eye(dim, dtype=complex)
    for p, q, lam in _pair_blocks(T):
        rho = rho @ (np.eye(dim) - 1j * lam * rotated[p] @ rotated[q])
    return DenseState.from_array(rho / dim, atol=1e-8)


def gaussian_state_from_exponent(G: GMatrix) -> DenseState:
    """Density matrix ``exp(-(i/4) sum G_ij w_i w_j) / Z`` by direct exponentiation."""
    _check_cap(G.n)
    w = np.array(majorana_operators(G.n))
    exponent = -0.25j * np.einsum("ij,iab,jbc->ac", G.data, w, w)
    rho = spla.expm(0.5 * (exponent + exponent.conj().T))
    return DenseState.from_array(rho / np.trace(rho), atol=1e-8)


def _sqrt_psd(rho: np.ndarray) -> np.ndarray:
    values, vecs = spla.eigh(rho)
    return (vecs * np.sqrt(np.clip(values, 0.0, None))) @ vecs.conj().T


def uhlmann_fidelity_dense(r1: DenseState, r2: DenseState) -> float:
    """Return ``Tr sqrt(sqrt(rho) rho' sqrt(rho))``, clipped to [0, 1]."""
    if r1.rho.shape != r2.rho.shape:
        raise StructuralInputError("Fidelity needs states of equal dimension.")
    root = _sqrt_psd(r1.rho)
    product = root @ r2.rho @ root
    values = spla.eigvalsh(0.5 * (product + product.conj().T))
    return float(np.clip(np.sum(np.sqrt(np.clip(values, 0.0, None))), 0.0, 1.0))


def trace_preservation_violation(L: DenseLiouvillean) -> float:
    """Largest entry of ``vec(1)^dagger L``; zero for a trace-preserving generator."""
    identity = np.eye(L.dim).reshape(-1)
    return float(np.max(np.abs(identity @ L.matrix)))


def car_superoperators(n: int):
    """Superoperators ``a_j`` and ``a_j^dagger`` on the ``4^n`` operator space.

    ``a_j = -(i/2)(W w_j rho - W rho w_j)`` and
    ``a_j^dagger = -(i/2)(W w_j rho + W rho w_j)`` with ``W = i^n prod_j w_j``.

    Parameters
    ----------
    n : int
        Number of modes.

    Returns
    -------
    tuple
        Lists of the 2n annihilators and 2n creators.
    """
    _check_cap(n)
    w = majorana_operators(n)
    parity = (1j**n) * reduce(np.matmul, w)
    eye = np.eye(2**n)
    left = [np.kron(parity @ wj, eye) for wj in w]
    right = [np.kron(parity, wj.T) for wj in w]
    lower = [-0.5j * (a - b) for a, b in zip(left, right)]
    upper = [-0.5j * (a + b) for a, b in zip(left, right)]
    return lower, upper


def car_superoperator_check(n: int) -> CARReport:
    """Verify the canonical anticommutation relations of the superoperators.

    Parameters
    ----------
    n : int
        Number of modes, at most `CAR_MAX_MODES`.

    Returns
    -------
    CARReport
        Largest deviation of ``{a_j^dagger, a_k} = delta_jk``, largest
        ``{a_j, a_k}`` and largest ``a_j vec(1)``.
    """
    _check_cap(n, CAR_MAX_MODES)
    lower, upper = car_superoperators(n)
    size = lower[0].shape[0]
    eye = np.eye(size)
    identity = np.eye(2**n).reshape(-1)
    car = anti = vacuum = 0.0
    for j, (aj, adj) in enumerate(zip(lower, upper)):
        vacuum = max(vacuum, float(np.max(np.abs(aj @ identity))))
        for k, ak in enumerate(lower):
            mixed = adj @ ak + ak @ adj - (eye if j == k else 0.0)
            car = max(car, float(np.max(np.abs(mixed))))
            anti = max(anti, float(np.max(np.abs(aj @ ak + ak @ aj))))
    return CARReport(n, car, anti, vacuum)


def quadratic_form_check(model: QuadraticLindbladian) -> float:
    """Compare the dense superoperator with its form in the CAR superoperators.

    The form is ``-sum X_ij a_i^dagger a_j - sum Y_ij a_i^dagger a_j^dagger / 2``.

    Parameters
    ----------
    model : QuadraticLindbladian
        Model with at most `CAR_MAX_MODES` modes.

    Returns
    -------
    float
        Largest entrywise deviation.
    """
    _check_cap(model.n, CAR_MAX_MODES)
    S = build_structure(model)
    lower, upper = car_superoperators(model.n)
    dense = dense_liouvillean(model).matrix
    quadratic = np.zeros_like(dense)
    size = len(lower)
    for i in range(size):
        for j in range(size):
            if S.X[i, j]:
                quadratic -= S.X[i, j] * upper[i] @ lower[j]
            if S.Y[i, j]:
                quadratic -= 0.5 * S.Y[i, j] * upper[i] @ upper[j]
    return float(np.max(np.abs(dense - quadratic)))
