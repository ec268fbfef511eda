"""Test module for spin observables of Gaussian states."""

import numpy as np
import pytest

from ness_geometry import errors, gaussian, oracle


def _product_state(c: np.ndarray) -> gaussian.CorrelationMatrix:
    n = c.size
    data = np.zeros((2 * n, 2 * n), dtype=complex)
    for k, value in enumerate(c):
        data[k, n + k] = 1j * value
        data[n + k, k] = -1j * value
    return gaussian.CorrelationMatrix.from_array(data)


def test_product_state_magnetization() -> None:
    """Test that a product state has ``<z_i> = -c_i`` and no connected correlations."""
    c = np.array([0.3, -0.5, 0.9])
    C = _product_state(c)
    z = [gaussian.z_expectation(C, i) for i in range(1, 4)]
    np.testing.assert_allclose(z, -c, atol=1e-14)
    np.testing.assert_allclose(gaussian.zz_matrix(C, connected=True), 0.0, atol=1e-14)
    assert gaussian.zz_connected(C, 1, 3) == pytest.approx(0.0, abs=1e-14)


def test_maximally_mixed() -> None:
    """Test the correlators of the maximally mixed state."""
    C = gaussian.CorrelationMatrix.zeros(3)
    assert gaussian.z_expectation(C, 2) == 0.0
    assert gaussian.zz_correlator(C, 1, 2) == 0.0
    assert gaussian.zz_correlator(C, 3, 3) == 1.0


def test_correlators_match_dense_state() -> None:
    """Test magnetizations and two-site correlators against a dense density matrix."""
    rng = np.random.default_rng(7)
    n = 3
    a = rng.normal(size=(2 * n, 2 * n))
    C = gaussian.correlation_from_G(gaussian.GMatrix.from_array(a - a.T))
    state = oracle.gaussian_state_dense(C)
    for i in range(1, n + 1):
        z_i = oracle.site_operator(oracle.SIGMA_Z, i - 1, n)
        expected = state.expectation(z_i).real
        assert gaussian.z_expectation(C, i) == pytest.approx(expected, abs=1e-10)
        for j in range(1, n + 1):
            z_j = oracle.site_operator(oracle.SIGMA_Z, j - 1, n)
            expected = state.expectation(z_i @ z_j).real
            assert gaussian.zz_correlator(C, i, j) == pytest.approx(expected, abs=1e-10)


def test_zz_matrix_matches_pairwise() -> None:
    """Test that `zz_matrix` agrees with `zz_correlator` entry by entry."""
    rng = np.random.default_rng(8)
    n = 4
    a = rng.normal(size=(2 * n, 2 * n))
    C = gaussian.correlation_from_G(gaussian.GMatrix.from_array(a - a.T))
    zz = gaussian.zz_matrix(C)
    for i in range(n):
        for j in range(n):
            expected = gaussian.zz_correlator(C, i + 1, j + 1)
            assert zz[i, j] == pytest.approx(expected, abs=1e-12)


def test_site_out_of_range() -> None:
    """Test that sites are one-based and bounded by n."""
    C = gaussian.CorrelationMatrix.zeros(2)
    with pytest.raises(errors.StructuralInputError):
        gaussian.z_expectation(C, 0)
    with pytest.raises(errors.StructuralInputError):
        gaussian.zz_correlator(C, 1, 3)


if __name__ == "__main__":
    test_product_state_magnetization()
    test_maximally_mixed()
    test_correlators_match_dense_state()
    test_zz_matrix_matches_pairwise()
    test_site_out_of_range()
