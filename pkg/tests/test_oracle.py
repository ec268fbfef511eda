"""Test module for the dense few-mode ground truth."""

import numpy as np
import pytest

from ness_geometry import errors, gaussian, geometry, lindblad, models, oracle


def _random_model(rng: np.random.Generator, n: int) -> lindblad.QuadraticLindbladian:
    a = rng.normal(size=(2 * n, 2 * n))
    ell = rng.normal(size=(2, 2 * n)) + 1j * rng.normal(size=(2, 2 * n))
    return lindblad.QuadraticLindbladian(1j * (a - a.T), ell)


def test_sylvester_matches_dense_steady_state() -> None:
    """Test correlations, purity and magnetizations against the dense kernel."""
    for n in (2, 3):
        _compare_with_dense(n)


def _compare_with_dense(n: int) -> None:
    cfg = models.XYBoundaryConfig(n, 0.5, 0.5)
    model = models.build_xy_boundary(cfg)
    solution = lindblad.solve_steady(lindblad.build_structure(model))
    state = oracle.steady_state_dense(oracle.dense_liouvillean(model))
    np.testing.assert_allclose(
        solution.C.data, oracle.correlations_dense(state).data, atol=1e-8
    )
    assert gaussian.purity(solution.C) == pytest.approx(state.purity(), abs=1e-8)
    for i in range(1, n + 1):
        z_i = oracle.site_operator(oracle.SIGMA_Z, i - 1, n)
        assert gaussian.z_expectation(solution.C, i) == pytest.approx(
            state.expectation(z_i).real, abs=1e-8
        )
        for j in range(i + 1, n + 1):
            z_j = oracle.site_operator(oracle.SIGMA_Z, j - 1, n)
            assert gaussian.zz_correlator(solution.C, i, j) == pytest.approx(
                state.expectation(z_i @ z_j).real, abs=1e-8
            )


def test_spin_chain_matches_majorana_model() -> None:
    """Test that the Pauli form of the chain has the same steady correlations."""
    cfg = models.XYBoundaryConfig(3, 1.2, 0.3)
    spin = oracle.spin_liouvillean_xy(cfg)
    assert oracle.trace_preservation_violation(spin) < 1e-12
    state = oracle.steady_state_dense(spin)
    S = lindblad.build_structure(models.build_xy_boundary(cfg))
    solution = lindblad.solve_steady(S)
    np.testing.assert_allclose(
        oracle.correlations_dense(state).data, solution.C.data, atol=1e-8
    )


def test_car_superoperators() -> None:
    """Test the anticommutation relations of the superoperators."""
    for n in (1, 2, 3):
        report = oracle.car_superoperator_check(n)
        assert report.n == n
        assert report.max_car_violation < 1e-10
        assert report.max_anticommutator < 1e-10
        assert report.vacuum_violation < 1e-10


def test_quadratic_form() -> None:
    """Test that the dense generator is the quadratic form in X and Y."""
    rng = np.random.default_rng(31)
    for n in (1, 2):
        assert oracle.quadratic_form_check(_random_model(rng, n)) < 1e-10
    chain = models.build_xy_boundary(models.XYBoundaryConfig(3, 0.5, 0.5))
    assert oracle.quadratic_form_check(chain) < 1e-10


def test_trace_preservation() -> None:
    """Test that random quadratic generators preserve the trace."""
    rng = np.random.default_rng(32)
    L = oracle.dense_liouvillean(_random_model(rng, 2))
    assert L.dim == 4
    assert oracle.trace_preservation_violation(L) < 1e-12


def test_gaussian_state_forms_agree() -> None:
    """Test the product form of a Gaussian state against the matrix exponential."""
    rng = np.random.default_rng(33)
    a = rng.normal(size=(6, 6))
    G = gaussian.GMatrix.from_array(a - a.T)
    product = oracle.gaussian_state_dense(gaussian.correlation_from_G(G))
    exponential = oracle.gaussian_state_from_exponent(G)
    np.testing.assert_allclose(product.rho, exponential.rho, atol=1e-10)


def test_dense_spectrum_matches_enumeration() -> None:
    """Test that the dense eigenvalues are the sums ``-sum_j x_j n_j``."""
    rng = np.random.default_rng(34)
    model = _random_model(rng, 2)
    dense = oracle.dense_liouvillean(model).eigenvalues()
    enumerated = lindblad.liouvillean_spectrum(lindblad.build_structure(model), 4)
    assert dense.size == enumerated.size == 16
    for value in dense:
        assert np.min(np.abs(enumerated - value)) < 1e-8
    for value in enumerated:
        assert np.min(np.abs(dense - value)) < 1e-8


def test_dense_size_cap() -> None:
    """Test that the dense oracle refuses more than four modes."""
    with pytest.raises(errors.SizeCapError):
        oracle.dense_liouvillean(
            models.build_xy_boundary(models.XYBoundaryConfig(5, 0.5, 0.5))
        )
    with pytest.raises(errors.SizeCapError):
        oracle.car_superoperator_check(oracle.CAR_MAX_MODES + 1)


def test_fidelity_of_state_with_itself() -> None:
    """Test that the Uhlmann fidelity of a state with itself is one."""
    rng = np.random.default_rng(35)
    a = 0.5 * rng.normal(size=(4, 4))
    C = gaussian.correlation_from_G(gaussian.GMatrix.from_array(a - a.T))
    state = oracle.gaussian_state_dense(C)
    assert oracle.uhlmann_fidelity_dense(state, state) == pytest.approx(1.0, abs=1e-10)
    assert geometry.gaussian_fidelity(C, C) == pytest.approx(1.0, abs=1e-10)


def test_closed_dense_kernel_is_degenerate() -> None:
    """Test that a Hamiltonian-only generator has no unique kernel."""
    model = lindblad.QuadraticLindbladian(
        models.xy_hamiltonian(2, 0.5, 0.5), np.zeros((0, 4))
    )
    with pytest.raises(errors.NonUniqueSteadyStateError):
        oracle.steady_state_dense(oracle.dense_liouvillean(model))


if __name__ == "__main__":
    test_sylvester_matches_dense_steady_state()
    test_spin_chain_matches_majorana_model()
    test_car_superoperators()
    test_quadratic_form()
    test_trace_preservation()
    test_gaussian_state_forms_agree()
    test_dense_spectrum_matches_enumeration()
    test_dense_size_cap()
    test_fidelity_of_state_with_itself()
    test_closed_dense_kernel_is_degenerate()
