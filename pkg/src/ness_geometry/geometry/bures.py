"""Bures line element, metric tensor and fidelity of Gaussian fermionic states.

The metric is rescaled as :math:`ds^2 = 8\\, ds_B^2 = 16 (1 - F)` and reads, in the
eigenbasis of the correlation matrix,

.. math::

    ds^2 = {\\sum_{rs}}' \\frac{|dC_{rs}|^2}{1 - c_r c_s},

where the primed sum skips pairs with :math:`c_r c_s = 1`.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as spla

from ness_geometry.errors import ConvergenceError, StructuralInputError
from ness_geometry.gaussian.states import (
    CorrelationMatrix,
    TMatrix,
    hermitian_antisymmetric_part,
    t_from_correlation,
)
from ness_geometry.lindblad.shape import StructureDerivative, StructureMatrices, gap
from ness_geometry.lindblad.sylvester import DerivativeSet

__all__ = [
    "PSEUDO_INVERSE_ATOL",
    "METRIC_SYMMETRY_ATOL",
    "MetricTensor",
    "BoundReport",
    "line_element",
    "metric_tensor",
    "gaussian_fidelity",
    "pair_weight",
    "line_element_t_basis",
    "bound_report",
]

logger = logging.getLogger(__name__)

PSEUDO_INVERSE_ATOL = 1e-10
METRIC_SYMMETRY_ATOL = 1e-9
_PSD_RTOL = 1e-8
_SQRT_CLIP = 1e-12
_BOUND_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class MetricTensor:
    """Metric tensor over named parameter axes.

    Attributes
    ----------
    params : Tuple[str, ...]
        Axis names, in the order of the rows of `g`.
    g : np.ndarray
        Real symmetric p x p matrix.
    """

    params: Tuple[str, ...]
    g: np.ndarray

    def __post_init__(self) -> None:
        """Validate the shape and symmetry of the tensor."""
        g = np.asarray(self.g, dtype=float)
        p = len(self.params)
        if g.shape != (p, p):
            raise StructuralInputError(
                f"Metric for {p} axes must be {p} x {p}, found {g.shape}."
            )
        scale = max(1.0, float(np.max(np.abs(g), initial=0.0)))
        if np.max(np.abs(g - g.T), initial=0.0) > METRIC_SYMMETRY_ATOL * scale:
            raise StructuralInputError("Metric tensor must be symmetric.")
        g = 0.5 * (g + g.T)
        g.setflags(write=False)
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "g", g)
        if p and self.eigenvalues[0] < -_PSD_RTOL * scale:
            logger.warning(
                "Metric tensor has negative eigenvalue %.3e.", self.eigenvalues[0]
            )

    @property
    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues of g."""
        return spla.eigvalsh(self.g) if self.params else np.zeros(0)

    @property
    def largest_eigenvalue(self) -> float:
        """Return |g|, the largest eigenvalue of the metric."""
        return float(self.eigenvalues[-1]) if self.params else 0.0

    def component(self, mu: str, nu: str) -> float:
        """Return ``g[mu, nu]`` by axis name."""
        return float(self.g[self.params.index(mu), self.params.index(nu)])


@dataclass(frozen=True)
class BoundReport:
    """Line element per mode next to its two upper bounds.

    Attributes
    ----------
    ds2_per_n : float
        ``ds^2 / n``.
    p_c : float
        ``(1 - |C|^2)^{-1}``, infinite for a pure state.
    cs_bound : float
        ``2 n P_C |dC|^2``, bounding ``ds^2``.
    gap_bound : float
        ``2 P_C (|dY| + 2|dX|)^2 / delta^2``, bounding ``ds^2 / n``; infinite when the
        gap vanishes.
    cs_satisfied : bool
        Whether ``ds^2 <= cs_bound``.
    gap_satisfied : Optional[bool]
        Whether ``ds^2/n <= gap_bound``; None when the gap vanishes.
    """

    ds2_per_n: float
    p_c: float
    cs_bound: float
    gap_bound: float
    cs_satisfied: bool
    gap_satisfied: Optional[bool]


def pair_weight(
    x: Union[float, np.ndarray], y: Union[float, np.ndarray]
) -> Union[float, np.ndarray]:
    """Return ``(x - y)^2 / (1 - x y)``, at most 2 on ``[-1, 1]^2`` off ``xy = 1``."""
    return (x - y) ** 2 / (1.0 - x * y)


def _eigenbasis(C: CorrelationMatrix, dCs: Sequence[np.ndarray]):
    c, vecs = C.eigh()
    rotated = []
    for tangent in dCs:
        dc = np.asarray(tangent, dtype=complex)
        if dc.shape != C.data.shape:
            raise StructuralInputError(
                f"Tangent of shape {dc.shape} does not match C of shape {C.data.shape}."
            )
        rotated.append(vecs.conj().T @ dc @ vecs)
    weight = 1.0 - np.outer(c, c)
    keep = np.abs(weight) >= PSEUDO_INVERSE_ATOL
    inverse = np.divide(1.0, weight, out=np.zeros_like(weight), where=keep)
    return rotated, inverse


def line_element(C: CorrelationMatrix, dC: np.ndarray) -> float:
    """Bures line element ``ds^2`` along the tangent `dC`.

    Parameters
    ----------
    C : CorrelationMatrix
        Base point.
    dC : np.ndarray
        Tangent, Hermitian and transpose-antisymmetric.

    Returns
    -------
    float
        ``ds^2 >= 0``. For a pure C this is ``|dC|_2^2 / 2``.

    Raises
    ------
    StructuralInputError
        If `dC` has the wrong shape or symmetry.
    """
    dC = hermitian_antisymmetric_part(dC, "tangent dC", atol=1e-8)
    (d,), inverse = _eigenbasis(C, [dC])
    return float(np.sum(np.abs(d) ** 2 * inverse))


def metric_tensor(C: CorrelationMatrix, dCs: DerivativeSet) -> MetricTensor:
    """Metric tensor ``g_{mu nu}`` from certified correlation derivatives.

    Parameters
    ----------
    C : CorrelationMatrix
        Steady correlation matrix.
    dCs : DerivativeSet
        One derivative per parameter axis.

    Returns
    -------
    MetricTensor
        The real symmetric metric over ``dCs.axes``.

    Raises
    ------
    StructuralInputError
        If the axes and derivatives do not pair up.
    ConvergenceError
        If the metric carries an imaginary part above `METRIC_SYMMETRY_ATOL`.
    """
    if len(dCs.axes) != len(dCs.dC):
        raise StructuralInputError(
            f"{len(dCs.axes)} axes but {len(dCs.dC)} derivatives."
        )
    rotated, inverse = _eigenbasis(C, dCs.dC)
    p = len(rotated)
    g = np.zeros((p, p), dtype=complex)
    for mu in range(p):
        for nu in range(mu, p):
            # d_nu is Hermitian: (d_nu)_{sr} = conj((d_nu)_{rs})
            g[mu, nu] = np.sum(rotated[mu] * rotated[nu].conj() * inverse)
            g[nu, mu] = g[mu, nu].conjugate()
    scale = max(1.0, float(np.max(np.abs(g), initial=0.0)))
    residue = float(np.max(np.abs(np.imag(g)), initial=0.0))
    if residue > METRIC_SYMMETRY_ATOL * scale:
        raise ConvergenceError(
            "Metric tensor is not real", residue, METRIC_SYMMETRY_ATOL
        )
    return MetricTensor(params=dCs.axes, g=np.real(g))


def _sqrt_psd(t: TMatrix) -> np.ndarray:
    values, vecs = spla.eigh(t.data)
    return (vecs * np.sqrt(values)) @ vecs.conj().T


def gaussian_fidelity(C1: CorrelationMatrix, C2: CorrelationMatrix) -> float:
    """Uhlmann fidelity of two mixed Gaussian states in the Cayley parametrization.

    .. math::

        F = \\frac{\\det[1 + \\sqrt{\\sqrt{T} T' \\sqrt{T}}]^{1/2}}
        {\\det[1 + T]^{1/4} \\det[1 + T']^{1/4}}

    Parameters
    ----------
    C1 : CorrelationMatrix
        First state.
    C2 : CorrelationMatrix
        Second state.

    Returns
    -------
    float
        Fidelity in [0, 1].

    Raises
    ------
    StructuralInputError
        If the dimensions differ.
    """
    if C1.data.shape != C2.data.shape:
        raise StructuralInputError(
            f"Fidelity needs equal dimensions, found {C1.data.shape} and {C2.data.shape}."
        )
    t1 = t_from_correlation(C1)
    t2 = t_from_correlation(C2)
    root = _sqrt_psd(t1)
    product = root @ t2.data @ root
    m = spla.eigvalsh(0.5 * (product + product.conj().T))
    if np.min(m) < -_SQRT_CLIP:
        logger.warning("Negative eigenvalue %.3e in the fidelity product.", np.min(m))
    m = np.clip(m, 0.0, None)
    log_f = (
        0.5 * np.sum(np.log1p(np.sqrt(m)))
        - 0.25 * np.sum(np.log1p(spla.eigvalsh(t1.data)))
        - 0.25 * np.sum(np.log1p(spla.eigvalsh(t2.data)))
    )
    return float(np.clip(np.exp(log_f), 0.0, 1.0))


def line_element_t_basis(T: TMatrix, dT: np.ndarray) -> float:
    """Line element expressed through the Cayley matrix.

    .. math::

        ds^2 = 2 \\sum_{ij} \\frac{|dT_{ij}|^2}{(1 + t_i)(1 + t_j)(t_i + t_j)}

    Parameters
    ----------
    T : TMatrix
        Base point.
    dT : np.ndarray
        Hermitian tangent of T.

    Returns
    -------
    float
        ``ds^2``, equal to `line_element` on the corresponding tangent of C.
    """
    dT = np.asarray(dT, dtype=complex)
    if dT.shape != T.data.shape:
        raise StructuralInputError(f"dT of shape {dT.shape} does not match T.")
    t, vecs = spla.eigh(T.data)
    d = vecs.conj().T @ dT @ vecs
    denom = np.outer(1.0 + t, 1.0 + t) * np.add.outer(t, t)
    return float(2.0 * np.sum(np.abs(d) ** 2 / denom))


def bound_report(
    S: StructureMatrices,
    dS: StructureDerivative,
    C: CorrelationMatrix,
    dC: np.ndarray,
) -> BoundReport:
    """Evaluate the Cauchy-Schwarz and gap bounds on the line element.

    Parameters
    ----------
    S : StructureMatrices
        Structure matrices at the point.
    dS : StructureDerivative
        Derivatives of X and Y along a unit parameter step.
    C : CorrelationMatrix
        Steady correlation matrix.
    dC : np.ndarray
        Its derivative along the same step.

    Returns
    -------
    BoundReport
        Both bounds and whether they hold.
    """
    n = S.n
    ds2 = line_element(C, dC)
    norm_c = C.spectral_norm()
    p_c = float("inf") if norm_c >= 1.0 else 1.0 / (1.0 - norm_c**2)
    dc_norm = float(np.linalg.norm(dC, 2))
    cs_bound = 2.0 * n * p_c * dc_norm**2 if dc_norm else 0.0
    delta = gap(S).delta
    drive = float(np.linalg.norm(dS.dY, 2)) + 2.0 * float(np.linalg.norm(dS.dX, 2))
    if delta > 0.0:
        gap_bound = 2.0 * p_c * drive**2 / delta**2 if drive else 0.0
        limit = gap_bound * (1.0 + _BOUND_SLACK) + _BOUND_SLACK
        gap_satisfied: Optional[bool] = ds2 / n <= limit
    else:
        logger.warning("Gap bound undefined at vanishing gap.")
        gap_bound, gap_satisfied = float("inf"), None
    return BoundReport(
        ds2_per_n=ds2 / n,
        p_c=p_c,
        cs_bound=cs_bound,
        gap_bound=gap_bound,
        cs_satisfied=ds2 <= cs_bound * (1.0 + _BOUND_SLACK) + _BOUND_SLACK,
        gap_satisfied=gap_satisfied,
    )
