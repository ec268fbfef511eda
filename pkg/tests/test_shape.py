"""Test module for structure matrices, gaps and the Liouvillean spectrum."""

import numpy as np
import pytest

from ness_geometry import errors, lindblad, models


def _random_model(
    rng: np.random.Generator, n: int, h_scale: float = 1.0, l_scale: float = 1.0
) -> lindblad.QuadraticLindbladian:
    a = rng.normal(size=(2 * n, 2 * n))
    hamiltonian = 1j * h_scale * (a - a.T)
    ell = l_scale * (rng.normal(size=(2, 2 * n)) + 1j * rng.normal(size=(2, 2 * n)))
    return lindblad.QuadraticLindbladian(hamiltonian, ell)


def test_structure_matrices() -> None:
    """Test the reality and symmetry of X and Y."""
    rng = np.random.default_rng(11)
    S = lindblad.build_structure(_random_model(rng, 3))
    assert S.n == 3
    assert np.isrealobj(S.X)
    np.testing.assert_allclose(S.Y, -S.Y.T, atol=1e-14)
    np.testing.assert_allclose(np.real(S.Y), 0.0, atol=1e-14)
    np.testing.assert_allclose(S.M, S.M.conj().T, atol=1e-14)
    assert np.min(np.linalg.eigvalsh(S.X + S.X.T)) >= -1e-12


def test_invalid_hamiltonian() -> None:
    """Test that a real Hamiltonian matrix is rejected."""
    with pytest.raises(errors.StructuralInputError):
        lindblad.QuadraticLindbladian(np.eye(2), np.zeros((0, 2)))
    with pytest.raises(errors.StructuralInputError):
        lindblad.QuadraticLindbladian(np.zeros((4, 4)), np.zeros((1, 2)))


def test_gap_of_boundary_chain() -> None:
    """Test that the boundary-driven chain is stable with a positive gap."""
    model = models.build_xy_boundary(models.XYBoundaryConfig(6, 0.5, 0.5))
    report = lindblad.gap(lindblad.build_structure(model))
    assert report.stable
    assert report.delta > 0
    assert report.delta == pytest.approx(2 * np.min(np.real(report.x_spectrum)))
    assert report.x_spectrum.shape == (12,)


def test_marginal_gap_without_dissipation() -> None:
    """Test that a closed system has vanishing gap."""
    n = 2
    hamiltonian = models.xy_hamiltonian(n, 0.5, 0.5)
    model = lindblad.QuadraticLindbladian(hamiltonian, np.zeros((0, 2 * n)))
    S = lindblad.build_structure(model)
    report = lindblad.gap(S)
    assert report.stable
    assert report.delta == 0.0


def test_liouvillean_spectrum_counts() -> None:
    """Test the number of enumerated patterns per parity sector."""
    cfg = models.XYBoundaryConfig(2, 0.5, 0.5)
    S = lindblad.build_structure(models.build_xy_boundary(cfg))
    assert lindblad.liouvillean_spectrum(S, 2).size == 1 + 4 + 6
    assert lindblad.liouvillean_spectrum(S, 4, parity="even").size == 1 + 6 + 1
    assert lindblad.liouvillean_spectrum(S, 4, parity="odd").size == 4 + 4
    with pytest.raises(errors.StructuralInputError):
        lindblad.liouvillean_spectrum(S, 2, parity="both")


def test_three_gaps_agree() -> None:
    """Test that the gap from Re x, the even-sector gap and the X-hat gap coincide."""
    rng = np.random.default_rng(12)
    checked = 0
    for _ in range(100):
        S = lindblad.build_structure(_random_model(rng, 3, h_scale=3.0, l_scale=0.2))
        report = lindblad.gap(S)
        slowest = report.x_spectrum[0]
        if not report.diagonalizable_hint or abs(slowest.imag) < 1e-6:
            continue
        prop = lindblad.prop1_check(S)
        assert prop.max_discrepancy < 1e-8
        assert prop.delta == pytest.approx(report.delta)
        checked += 1
    assert checked >= 50


def test_three_gaps_agree_on_boundary_chain() -> None:
    """Test the three gaps of the eight-site chain with the reference bath rates."""
    S = models.xy_boundary_model(models.XYBoundaryConfig(8, 0.5, 0.6)).structure()
    report = lindblad.gap(S)
    assert report.diagonalizable_hint
    assert abs(report.x_spectrum[0].imag) > 1e-6
    prop = lindblad.prop1_check(S)
    assert prop.max_discrepancy < 1e-9
    assert prop.delta_l == pytest.approx(prop.delta, rel=1e-9)
    assert prop.delta_xhat == pytest.approx(prop.delta, rel=1e-9)


def test_unstable_x_rejected() -> None:
    """Test that an X with negative spectrum is refused."""
    S = lindblad.StructureMatrices(X=-np.eye(2), Y=np.zeros((2, 2)), M=np.zeros((2, 2)))
    assert not lindblad.gap(S).stable
    with pytest.raises(errors.StabilityError):
        lindblad.prop1_check(S)


def test_xhat_inverse_norm_of_normal_x() -> None:
    """Test ``|X-hat^{-1}| = 1/min|x_i + x_j|`` for a symmetric X."""
    rng = np.random.default_rng(13)
    ell = rng.normal(size=(4, 4))
    S = lindblad.build_structure(lindblad.QuadraticLindbladian(np.zeros((4, 4)), ell))
    x = np.linalg.eigvalsh(S.X)
    assert lindblad.xhat_inverse_norm(S) == pytest.approx(1 / (2 * x[0]), rel=1e-8)
    xhat = lindblad.xhat_matrix(S)
    assert xhat.shape == (16, 16)
    assert np.min(np.abs(np.linalg.eigvals(xhat))) == pytest.approx(2 * x[0], rel=1e-8)


def test_xhat_inverse_norm_of_non_normal_x() -> None:
    """Test ``|X-hat^{-1}|`` against the dense inverse for a non-normal X."""
    rng = np.random.default_rng(14)
    S = lindblad.build_structure(_random_model(rng, 2, h_scale=1.0, l_scale=0.6))
    report = lindblad.gap(S)
    assert report.delta > 0 and report.diagonalizable_hint
    assert np.linalg.norm(S.X @ S.X.T - S.X.T @ S.X) > 1e-3
    dense = np.linalg.norm(np.linalg.inv(lindblad.xhat_matrix(S)), 2)
    assert lindblad.xhat_inverse_norm(S) == pytest.approx(dense, rel=1e-8)
    x = report.x_spectrum
    assert dense >= 1 / np.min(np.abs(np.add.outer(x, x))) * (1 - 1e-12)


if __name__ == "__main__":
    test_structure_matrices()
    test_invalid_hamiltonian()
    test_gap_of_boundary_chain()
    test_marginal_gap_without_dissipation()
    test_liouvillean_spectrum_counts()
    test_three_gaps_agree()
    test_three_gaps_agree_on_boundary_chain()
    test_unstable_x_rejected()
    test_xhat_inverse_norm_of_normal_x()
    test_xhat_inverse_norm_of_non_normal_x()
