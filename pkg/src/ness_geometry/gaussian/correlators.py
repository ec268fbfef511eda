"""Spin observables of a Jordan-Wigner chain from its Majorana correlations.

Sites are numbered ``1..n``. With the Majorana convention of
`ness_geometry.gaussian.states`, :math:`\\sigma^z_\\ell = i w_\\ell w_{n+\\ell}`, so
single-site and two-site :math:`\\sigma^z` expectations follow from Wick's theorem.
"""

import numpy as np

from ness_geometry.errors import StructuralInputError
from ness_geometry.gaussian.states import CorrelationMatrix

__all__ = [
    "ZZ_PREFACTOR",
    "z_expectation",
    "zz_correlator",
    "zz_connected",
    "zz_matrix",
]

# (i)^2 from sigma^z_i sigma^z_j = (i w_i w_{n+i})(i w_j w_{n+j}).
ZZ_PREFACTOR = -1.0


def _check_site(C: CorrelationMatrix, site: int) -> None:
    if not 1 <= site <= C.n:
        raise StructuralInputError(f"Site must lie in 1..{C.n}, found {site}.")


def z_expectation(C: CorrelationMatrix, i: int) -> float:
    """Return the magnetization ``<sigma^z_i>``.

    Parameters
    ----------
    C : CorrelationMatrix
        Correlation matrix of the chain.
    i : int
        Site, ``1 <= i <= n``.

    Returns
    -------
    float
        The expectation value.
    """
    _check_site(C, i)
    return float(np.real(1j * C.data[i - 1, C.n + i - 1]))


def zz_correlator(C: CorrelationMatrix, i: int, j: int) -> float:
    """Return ``<sigma^z_i sigma^z_j>`` by the four-point Wick contraction.

    For distinct Majoranas the four-point function is the Pfaffian of the 4 x 4
    correlation block, ``<abcd> = C_ab C_cd - C_ac C_bd + C_ad C_bc``.

    Parameters
    ----------
    C : CorrelationMatrix
        Correlation matrix of the chain.
    i : int
        First site.
    j : int
        Second site.

    Returns
    -------
    float
        The two-site correlator; 1 for ``i == j``.
    """
    _check_site(C, i)
    _check_site(C, j)
    if i == j:
        return 1.0
    n, c = C.n, C.data
    a, b, p, q = i - 1, n + i - 1, j - 1, n + j - 1
    pfaffian = c[a, b] * c[p, q] - c[a, p] * c[b, q] + c[a, q] * c[b, p]
    return float(np.real(ZZ_PREFACTOR * pfaffian))


def zz_connected(C: CorrelationMatrix, i: int, j: int) -> float:
    """Connected correlator ``<z_i z_j> - <z_i><z_j>``."""
    return zz_correlator(C, i, j) - z_expectation(C, i) * z_expectation(C, j)


def zz_matrix(C: CorrelationMatrix, connected: bool = False) -> np.ndarray:
    """Return all two-site correlators as an n x n matrix (zero-based indices).

    Parameters
    ----------
    C : CorrelationMatrix
        Correlation matrix of the chain.
    connected : bool
        Subtract the product of magnetizations. Defaults to False.

    Returns
    -------
    np.ndarray
        Symmetric matrix of correlators.
    """
    n, c = C.n, C.data
    x = c[:n, :n]
    y = c[n:, n:]
    xy = c[:n, n:]
    diag = np.diag(xy)
    # C_ab C_cd - C_ac C_bd + C_ad C_bc with a=i, b=n+i, c=j, d=n+j
    # C_bc = C[n+i, j] = -C[j, n+i]
    pf = np.outer(diag, diag) - x * y - xy * xy.T
    zz = np.real(ZZ_PREFACTOR * pf)
    np.fill_diagonal(zz, 1.0)
    if connected:
        z = np.real(1j * diag)
        zz = zz - np.outer(z, z)
    return zz
