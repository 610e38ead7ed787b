"""Tests for schedules and the scalar descent loop."""

import numpy as np
import pytest

from smoothgd.optimizers import (
    ConstantSigma,
    GradientFunction,
    NumericError,
    PlateauSigma,
    RatioSigma,
    RunConfig,
    RunStatus,
    run,
    stationarity_iteration_bound,
)
from smoothgd.saddle import QuadraticObjective, canonical_objective


def test_constant_schedule():
    s = ConstantSigma(2.5)
    assert s(0) == 2.5 and s(1000) == 2.5
    assert s.bound == 2.5
    with pytest.raises(ValueError):
        ConstantSigma(-1.0)


def test_ratio_schedule_values():
    s = RatioSigma()
    assert s(0) == pytest.approx(2.0 / 3.0, abs=0)
    assert s(1) == pytest.approx(3.0 / 4.0, abs=0)
    assert s(98) == pytest.approx(100.0 / 101.0, abs=0)
    assert s.bound == 1.0
    values = [s(k) for k in range(10000)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] < 1.0


def test_plateau_schedule():
    s = PlateauSigma(8)
    r = RatioSigma()
    for k in range(8):
        assert s(k) == r(k)
    assert s(8) == s(9) == s(10 ** 6) == pytest.approx(10.0 / 11.0, abs=0)
    assert s.bound == s(8)
    with pytest.raises(ValueError):
        PlateauSigma(-1)


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(eta=0.0, max_iters=10)
    with pytest.raises(ValueError):
        RunConfig(eta=0.1, max_iters=-1)
    with pytest.raises(ValueError):
        RunConfig(eta=0.1, max_iters=10, eps_stationary=-1e-9)
    with pytest.raises(ValueError):
        RunConfig(eta=0.1, max_iters=10, escape_radius=0.0)


def test_gd_contraction_exact():
    # plain descent on the stable axis of diag(2, -2): x_k = 0.8^k x_0
    objective = canonical_objective(2, scale=2.0)
    config = RunConfig(eta=0.1, max_iters=40)
    result = run(objective, np.array([1.0, 0.0]), config, ConstantSigma(0.0))
    assert result.status is RunStatus.MAX_ITERS
    assert result.iterations_used == 40
    np.testing.assert_allclose(result.final_point, [0.8 ** 40, 0.0], rtol=1e-13)


def test_smoothed_step_shrinks_less():
    # one smoothed step divides the gradient term by 1 + 2 sigma
    objective = canonical_objective(2, scale=2.0)
    config = RunConfig(eta=0.1, max_iters=1)
    sigma = 1.5
    result = run(objective, np.array([1.0, 0.0]), config, ConstantSigma(sigma))
    g = 2.0  # gradient at [1, 0]
    expect0 = 1.0 - 0.1 * (1 + sigma) * g / (1 + 2 * sigma)
    expect1 = -0.1 * sigma * g / (1 + 2 * sigma)
    np.testing.assert_allclose(result.final_point, [expect0, expect1], atol=1e-15)


def test_immediate_stationarity():
    objective = canonical_objective(2)
    config = RunConfig(eta=0.1, max_iters=100, eps_stationary=10.0)
    result = run(objective, np.array([0.5, 0.5]), config, RatioSigma())
    assert result.status is RunStatus.REACHED_STATIONARY
    assert result.iterations_used == 0
    np.testing.assert_array_equal(result.final_point, [0.5, 0.5])


def test_escape_detected_at_start():
    objective = canonical_objective(2)
    config = RunConfig(eta=0.1, max_iters=100, escape_radius=1.0)
    result = run(objective, np.array([2.0, 2.0]), config, ConstantSigma(0.0))
    assert result.status is RunStatus.ESCAPED
    assert result.iterations_used == 0


def test_unstable_axis_escapes():
    objective = canonical_objective(2, scale=2.0)
    config = RunConfig(eta=0.1, max_iters=10 ** 4, escape_radius=100.0)
    result = run(objective, np.array([0.0, 1e-8]), config, ConstantSigma(0.0))
    assert result.status is RunStatus.ESCAPED
    assert np.linalg.norm(result.final_point) > 100.0


def test_trajectory_recording():
    objective = canonical_objective(2, scale=2.0)
    config = RunConfig(eta=0.1, max_iters=7, record_trajectory=True)
    x0 = np.array([1.0, 0.0])
    result = run(objective, x0, config, RatioSigma())
    assert result.trajectory.shape == (8, 2)
    np.testing.assert_array_equal(result.trajectory[0], x0)
    np.testing.assert_array_equal(result.trajectory[-1], result.final_point)


def test_numeric_error_reports_iteration():
    objective = canonical_objective(2, scale=2.0)
    config = RunConfig(eta=1e300, max_iters=50)
    with pytest.raises(NumericError) as info, np.errstate(over="ignore"):
        run(objective, np.array([1.0, 1.0]), config, ConstantSigma(0.0))
    assert info.value.iteration >= 0
    assert info.value.iterate.shape == (2,)


def test_gradient_function_adapter():
    # cubic gradient, no closed form needed by the loop
    objective = GradientFunction(2, lambda x: x ** 3)
    config = RunConfig(eta=0.1, max_iters=25)
    result = run(objective, np.array([0.5, -0.5]), config, ConstantSigma(0.0))
    assert result.status is RunStatus.MAX_ITERS
    assert np.all(np.abs(result.final_point) < 0.5)
    with pytest.raises(NotImplementedError):
        objective.value(np.zeros(2))


def test_x0_validation():
    objective = canonical_objective(3)
    config = RunConfig(eta=0.1, max_iters=5)
    with pytest.raises(ValueError):
        run(objective, np.zeros(2), config, ConstantSigma(0.0))
    with pytest.raises(ValueError):
        run(objective, np.array([np.nan, 0.0, 0.0]), config, ConstantSigma(0.0))


def test_iteration_bound_values():
    # C = 0 reduces to the plain descent bound 2 L (f0 - f*) / eps^2
    assert stationarity_iteration_bound(0.0, 1.0, 0.5, 0.0, 0.1) == pytest.approx(100.0, rel=1e-12)
    # C = 1: 2 (1 + 4)^2 / (1 + 8) = 50 / 9 times L delta / eps^2
    assert stationarity_iteration_bound(1.0, 2.0, 1.0, 0.0, 0.1) == pytest.approx(
        2 * 25 * 2 * 1.0 / (9 * 0.01), rel=1e-15)
    with pytest.raises(ValueError):
        stationarity_iteration_bound(-0.5, 1.0, 1.0, 0.0, 0.1)
    with pytest.raises(ValueError):
        stationarity_iteration_bound(0.0, 1.0, 1.0, 0.0, 0.0)


def test_nonsymmetric_matrix_rejected():
    with pytest.raises(ValueError):
        QuadraticObjective(np.array([[1.0, 2.0], [0.0, 1.0]]))
