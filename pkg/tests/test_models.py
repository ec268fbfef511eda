"""Test module for the XY chain and the dissipative ring."""

import math

import numpy as np
import pytest

from ness_geometry import errors, gaussian, lindblad, models, scaling


def test_chain_config_validation() -> None:
    """Test that too short chains and negative rates are rejected."""
    with pytest.raises(errors.StructuralInputError):
        models.XYBoundaryConfig(1, 0.5, 0.5)
    with pytest.raises(errors.StructuralInputError):
        models.XYBoundaryConfig(4, 0.5, 0.5, gl_plus=-0.1)
    with pytest.raises(errors.StructuralInputError):
        models.XYBoundaryConfig(4, math.inf, 0.5)
    with pytest.raises(errors.StructuralInputError):
        models.RingConfig(4, 0.5, 0.5, mu=0.0, nu=0.0)
    with pytest.raises(errors.StructuralInputError):
        models.RingConfig(4, 0.5, 0.5, epsilon=0.0)


def test_hamiltonian_is_imaginary_antisymmetric() -> None:
    """Test the symmetry of the Majorana Hamiltonian."""
    H = models.xy_hamiltonian(5, 0.7, 0.3)
    np.testing.assert_allclose(H, -H.T, atol=1e-15)
    np.testing.assert_allclose(np.real(H), 0.0, atol=1e-15)
    np.testing.assert_allclose(H, H.conj().T, atol=1e-15)


def test_ring_spectrum_follows_dispersion() -> None:
    """Test that X of the weakly coupled ring has eigenvalues near ``±4i omega_k``."""
    cfg = models.RingConfig(8, 0.5, 0.5, epsilon=1e-6)
    S = lindblad.build_structure(models.build_ring_numeric(cfg))
    x = np.linalg.eigvals(S.X)
    omega = models.momentum_angles(cfg).omega
    expected = np.sort(np.concatenate([4 * omega, -4 * omega]))
    np.testing.assert_allclose(np.sort(x.imag), expected, atol=1e-5)
    np.testing.assert_allclose(x.real, 0.0, atol=1e-8)


def test_phase_diagnostics() -> None:
    """Test phase labels and the localization length."""
    assert models.phase_diagnostics(0.5, 0.5).phase_label is models.PhaseLabel.LRMC
    assert models.phase_diagnostics(0.5, 0.5).xi is None
    srmc = models.phase_diagnostics(1.5, 0.6)
    assert srmc.phase_label is models.PhaseLabel.SRMC
    assert srmc.h_c == pytest.approx(0.64)
    assert srmc.xi == pytest.approx(math.sqrt(2 * 0.64 / 0.86) / 8)
    critical = models.phase_diagnostics(0.75, 0.5)
    assert critical.phase_label is models.PhaseLabel.CRITICAL_LINE
    assert models.phase_diagnostics(0.0, 0.5).phase_label is models.PhaseLabel.SRMC
    assert models.phase_diagnostics(0.3, 0.0).phase_label is models.PhaseLabel.SRMC


def test_critical_field_and_imbalance() -> None:
    """Test ``h_c = |1 - gamma^2|`` and the default population imbalance."""
    assert models.critical_field(0.5) == pytest.approx(0.75)
    assert models.critical_field(2.0) == pytest.approx(3.0)
    assert models.RingConfig(4, 0.5, 0.5).Lambda == pytest.approx(0.6)


def test_ring_analytic_matches_numeric() -> None:
    """Test the weak-coupling correlations against the Sylvester solve."""
    cfg = models.RingConfig(8, 0.5, 0.5, epsilon=1e-3)
    S = lindblad.build_structure(models.build_ring_numeric(cfg))
    numeric = lindblad.solve_steady(S)
    analytic = models.ring_analytic_correlations(cfg)
    np.testing.assert_allclose(analytic.data, numeric.C.data, atol=1e-2)


def test_ring_analytic_spectrum() -> None:
    """Test that the analytic correlations have eigenvalues ``±Lambda cos(q_k/2)``."""
    cfg = models.RingConfig(6, 0.4, 0.8)
    C = models.ring_analytic_correlations(cfg)
    q = models.momentum_angles(cfg).q
    c = cfg.Lambda * np.abs(np.cos(0.5 * q))
    expected = np.sort(np.concatenate([c, -c]))
    np.testing.assert_allclose(np.linalg.eigvalsh(C.data), expected, atol=1e-12)


def test_ring_fourier_blocks() -> None:
    """Test that the Fourier basis brings C to its momentum blocks."""
    cfg = models.RingConfig(6, 0.4, 0.8)
    V = models.fourier_block_basis(cfg.n)
    np.testing.assert_allclose(V @ V.conj().T, np.eye(12), atol=1e-12)
    blocks = models.ring_analytic_blocks(cfg)
    rotated = V @ models.ring_analytic_correlations(cfg).data @ V.conj().T
    for k, block in enumerate(blocks):
        np.testing.assert_allclose(
            rotated[2 * k : 2 * k + 2, 2 * k : 2 * k + 2], block, atol=1e-12
        )
    off_diagonal = rotated.copy()
    for k in range(cfg.n):
        off_diagonal[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = 0
    np.testing.assert_allclose(off_diagonal, 0.0, atol=1e-12)


def test_ring_metric_matches_numeric() -> None:
    """Test the closed-form ring metric against the numeric pipeline."""
    cfg = models.RingConfig(8, 0.5, 0.5, epsilon=1e-3)
    analytic = models.ring_metric_analytic(cfg)
    numeric = scaling.evaluate_detailed(models.ring_model(cfg)).metric
    scale = np.max(np.abs(analytic.g))
    np.testing.assert_allclose(numeric.g, analytic.g, rtol=5e-2, atol=5e-2 * scale)


def test_ring_metric_scaling() -> None:
    """Test that ``g_hh`` grows as ``n^2`` at ``h = 1`` and as ``n`` at ``h = 0.5``."""
    ns = (64, 128, 256, 512)
    for h, exponent in ((1.0, 2.0), (0.5, 1.0)):
        values = [
            models.ring_metric_analytic(models.RingConfig(n, h, 0.5)).component(
                "h", "h"
            )
            for n in ns
        ]
        fit = scaling.fit_powerlaw(ns, values)
        assert fit.exponent == pytest.approx(exponent, abs=0.2)


def test_ring_metric_rejects_pure_bath() -> None:
    """Test that ``|Lambda| = 1`` has no ring metric."""
    with pytest.raises(errors.StructuralInputError):
        models.ring_metric_analytic(models.RingConfig(4, 0.5, 0.5, mu=0.0, nu=1.0))


def _zz_profile(h: float, gamma: float, n: int, base: int) -> np.ndarray:
    S = models.xy_boundary_model(models.XYBoundaryConfig(n, h, gamma)).structure()
    zz = gaussian.zz_matrix(lindblad.solve_steady(S).C, connected=True)
    return np.abs(zz[base, base : base + n // 2 + 1])


def test_zz_decay_and_long_range_plateau() -> None:
    """Test ``exp(-d/xi)`` decay of ``zz`` correlations and their long-range plateau."""
    n, base = 40, 10
    distances = np.arange(5, n // 2 + 1)
    xi = models.phase_diagnostics(0.66, 0.6).xi
    short = _zz_profile(0.66, 0.6, n, base)[distances]
    envelope = np.maximum.accumulate(short[::-1])[::-1]
    slope, intercept = np.polyfit(distances, np.log(envelope), 1)
    assert 0.5 / xi <= -slope <= 2.0 / xi
    far = distances >= n // 4
    extrapolation = np.exp(intercept + slope * distances[far])
    plateau = _zz_profile(0.3, 0.6, n, base)[distances[far]]
    assert np.all(plateau >= 10 * extrapolation)


def test_ring_commutes_with_site_shift() -> None:
    """Test that the ring is invariant under a one-site cyclic shift."""
    cfg = models.RingConfig(8, 0.5, 0.5)
    shift = np.kron(np.eye(2), np.roll(np.eye(cfg.n), 1, axis=0))
    S = lindblad.build_structure(models.build_ring_numeric(cfg))
    np.testing.assert_allclose(shift @ S.X, S.X @ shift, atol=1e-10)
    np.testing.assert_allclose(shift @ S.Y, S.Y @ shift, atol=1e-10)
    numeric = lindblad.solve_steady(S).C.data
    np.testing.assert_allclose(shift @ numeric, numeric @ shift, atol=1e-10)
    analytic = models.ring_analytic_correlations(cfg).data
    np.testing.assert_allclose(shift @ analytic, analytic @ shift, atol=1e-10)


def test_bounds_along_ring_series() -> None:
    """Test the line-element bounds on the numeric ring from 64 to 512 sites."""
    for h in (1.0, 0.5):
        for n in (64, 128, 256, 512):
            cfg = models.RingConfig(n, h, 0.5)
            assert cfg.Lambda == pytest.approx(0.6)
            evaluation = scaling.evaluate_detailed(
                models.ring_model(cfg), with_bounds=True
            )
            assert len(evaluation.bounds) == 2
            for report in evaluation.bounds:
                assert report.cs_satisfied
                assert report.gap_satisfied is None or report.gap_satisfied


if __name__ == "__main__":
    test_chain_config_validation()
    test_hamiltonian_is_imaginary_antisymmetric()
    test_ring_spectrum_follows_dispersion()
    test_phase_diagnostics()
    test_critical_field_and_imbalance()
    test_ring_analytic_matches_numeric()
    test_ring_analytic_spectrum()
    test_ring_fourier_blocks()
    test_ring_metric_matches_numeric()
    test_ring_metric_scaling()
    test_ring_metric_rejects_pure_bath()
    test_zz_decay_and_long_range_plateau()
    test_ring_commutes_with_site_shift()
    test_bounds_along_ring_series()
