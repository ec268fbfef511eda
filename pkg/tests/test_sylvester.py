"""Test module for the steady-state and derivative Sylvester solves."""

import numpy as np
import pytest

from ness_geometry import errors, lindblad, models
from ness_geometry.lindblad import sylvester


def _chain(n: int, h: float = 0.5, gamma: float = 0.5) -> lindblad.StructureMatrices:
    cfg = models.XYBoundaryConfig(n, h, gamma)
    return lindblad.build_structure(models.build_xy_boundary(cfg))


def test_steady_state_solves_equation() -> None:
    """Test that the Schur solution satisfies ``X C + C X^T = Y``."""
    S = _chain(8)
    solution = lindblad.solve_steady(S)
    C = solution.C.data
    np.testing.assert_allclose(S.X @ C + C @ S.X.T, S.Y, atol=1e-10)
    assert solution.method_tag == "schur_elimination"
    assert solution.residual < 1e-10
    assert solution.factor is not None
    assert solution.C.spectral_norm() <= 1.0


def test_schur_and_kronecker_agree() -> None:
    """Test the Schur solve against the vectorized Kronecker solve."""
    S = _chain(5, h=1.5, gamma=0.6)
    schur = lindblad.solve_steady(S)
    kron = lindblad.solve_steady_vectorized(S)
    assert kron.method_tag == "kron_vectorized"
    np.testing.assert_allclose(schur.C.data, kron.C.data, atol=1e-10)


def test_schur_and_kronecker_agree_on_random_models() -> None:
    """Test both steady-state solves on random dissipative models up to eight modes."""
    rng = np.random.default_rng(21)
    for trial in range(50):
        n = 2 + trial % 7
        a = rng.normal(size=(2 * n, 2 * n))
        ell = rng.normal(size=(2 * n, 2 * n)) + 1j * rng.normal(size=(2 * n, 2 * n))
        model = lindblad.QuadraticLindbladian(1j * (a - a.T), 0.5 * ell)
        S = lindblad.build_structure(model)
        assert lindblad.gap(S).delta > 0
        schur = lindblad.solve_steady(S)
        kron = lindblad.solve_steady_vectorized(S)
        np.testing.assert_allclose(schur.C.data, kron.C.data, atol=1e-9)


def test_triangular_kernel_releases_gil() -> None:
    """Test that the compiled triangular kernel runs without the GIL."""
    assert sylvester._triangular_lyapunov.targetoptions.get("nogil") is True


def test_kronecker_size_cap() -> None:
    """Test that the Kronecker solve refuses large systems."""
    with pytest.raises(errors.SizeCapError):
        lindblad.solve_steady_vectorized(_chain(lindblad.VECTORIZED_MAX_MODES + 1))


def test_closed_system_has_no_unique_state() -> None:
    """Test that a vanishing gap is reported as a non-unique steady state."""
    n = 3
    model = lindblad.QuadraticLindbladian(
        models.xy_hamiltonian(n, 0.5, 0.5), np.zeros((0, 2 * n))
    )
    S = lindblad.build_structure(model)
    with pytest.raises(errors.NonUniqueSteadyStateError):
        lindblad.solve_steady(S)
    with pytest.raises(errors.NonUniqueSteadyStateError):
        lindblad.solve_steady_vectorized(S)


def test_derivatives_match_finite_differences() -> None:
    """Test the derivative solve against differences of steady states."""
    cfg = models.XYBoundaryConfig(6, 0.4, 0.7)
    family = models.xy_boundary_model(cfg)
    S = family.structure()
    solution = lindblad.solve_steady(S)
    dS = family.structure_derivatives()
    derivatives = lindblad.solve_derivatives(S, dS, solution.C, solution.factor)
    assert derivatives.axes == ("h", "gamma")
    assert len(derivatives) == 2
    step = 1e-5
    point = {"h": cfg.h, "gamma": cfg.gamma}
    for axis, dC in zip(derivatives.axes, derivatives.dC):
        up = dict(point, **{axis: point[axis] + step})
        down = dict(point, **{axis: point[axis] - step})
        plus = lindblad.solve_steady(family.structure(up))
        minus = lindblad.solve_steady(family.structure(down))
        numeric = (plus.C.data - minus.C.data) / (2 * step)
        np.testing.assert_allclose(dC, numeric, atol=1e-6)
        np.testing.assert_allclose(dC, -dC.T, atol=1e-12)


def test_derivatives_without_factor() -> None:
    """Test that the derivative solve factorizes X itself when needed."""
    family = models.xy_boundary_model(models.XYBoundaryConfig(4, 0.5, 0.5))
    S = family.structure()
    solution = lindblad.solve_steady(S)
    dS = family.structure_derivatives(axes=["gamma"])
    shared = lindblad.solve_derivatives(S, dS, solution.C, solution.factor)
    fresh = lindblad.solve_derivatives(S, dS, solution.C)
    np.testing.assert_allclose(shared.dC[0], fresh.dC[0], atol=1e-12)


def test_derivative_shape_mismatch() -> None:
    """Test that a derivative of the wrong size is rejected."""
    S = _chain(3)
    solution = lindblad.solve_steady(S)
    wrong = lindblad.StructureDerivative("h", np.zeros((4, 4)), np.zeros((4, 4)))
    with pytest.raises(errors.StructuralInputError):
        lindblad.solve_derivatives(S, [wrong], solution.C, solution.factor)


def test_unknown_axis() -> None:
    """Test that differentiating along a missing axis fails."""
    family = models.xy_boundary_model(models.XYBoundaryConfig(3, 0.5, 0.5))
    with pytest.raises(errors.StructuralInputError):
        family.structure_derivatives(axes=["mu"])


if __name__ == "__main__":
    test_steady_state_solves_equation()
    test_schur_and_kronecker_agree()
    test_schur_and_kronecker_agree_on_random_models()
    test_triangular_kernel_releases_gil()
    test_kronecker_size_cap()
    test_closed_system_has_no_unique_state()
    test_derivatives_match_finite_differences()
    test_derivatives_without_factor()
    test_derivative_shape_mismatch()
    test_unknown_axis()
