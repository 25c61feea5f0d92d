import numpy as np
import pytest

from trustboost import (
    BaselineKind,
    ClampConfig,
    HessianNotPositiveError,
    LossKind,
    check_appendix_inequalities,
    check_linear,
    check_sublinear,
    grad_quad,
    run_one_instance,
)


def test_mse_one_step_quadratic_convergence():
    trace = run_one_instance(
        LossKind.squared(), 3.0, 0.0, BaselineKind("trboost"), 1, mu=0.0
    )
    assert abs(trace.final_score - 3.0) <= 1e-12
    assert trace.losses[-1] <= 1e-24


def test_mae_fixed_decrement():
    trace = run_one_instance(
        LossKind.absolute(), 1.0, 0.0, BaselineKind("trboost"), 10, mu=10.0
    )
    decrements = trace.losses[:-1] - trace.losses[1:]
    assert np.all(np.abs(decrements[:9] - 0.1) <= 1e-12)
    check = check_sublinear(trace)
    assert check.passed and check.c > 0


def test_logistic_per_step_contraction():
    clamp = ClampConfig(rho=1e-4)
    trace = run_one_instance(
        LossKind.logistic(), 1.0, 0.0, BaselineKind("trboost"), 200, mu=1.0, clamp=clamp
    )
    for t in range(200):
        _, h = grad_quad(LossKind.logistic(), 1.0, trace.scores[t], clamp)
        assert trace.losses[t + 1] / trace.losses[t] <= 1.0 - 0.5 * h / (h + 1.0) + 1e-12
    check = check_linear(trace)
    assert check.passed and check.c < 1.0


def test_newton_with_rate_matches_shifted_trust_step():
    # -g/(h + (1-nu)*h/nu) == -nu*g/h for the constant-curvature loss
    nu = 0.25
    mu = (1.0 - nu) * 2.0 / nu
    ours = run_one_instance(LossKind.squared(), 2.0, -1.0, BaselineKind("trboost"), 20, mu=mu)
    newton = run_one_instance(LossKind.squared(), 2.0, -1.0, BaselineKind("newton", nu=nu), 20)
    np.testing.assert_allclose(ours.losses, newton.losses, rtol=1e-12, atol=1e-300)


def test_newton_refuses_flat_losses():
    with pytest.raises(HessianNotPositiveError):
        run_one_instance(LossKind.absolute(), 1.0, 0.0, BaselineKind("newton", nu=0.1), 3)


def test_gbdt_step_is_scaled_gradient():
    trace = run_one_instance(LossKind.squared(), 1.0, 0.0, BaselineKind("gbdt", nu=0.25), 1)
    # step = -nu * g = -0.25 * 2*(0-1) = 0.5
    assert trace.scores[1] == pytest.approx(0.5, abs=1e-15)


def test_check_sublinear_analytic_sequences():
    harmonic = 1.0 / (np.arange(30) + 1.0)
    check = check_sublinear(harmonic)
    assert check.passed
    assert check.c == pytest.approx(0.5, rel=1e-9)  # min of t/(t+1) at t=1
    flat = check_sublinear(np.ones(10))
    assert not flat.passed and flat.c == 0.0


def test_check_sublinear_non_monotone_fails_with_index():
    check = check_sublinear(np.array([1.0, 0.5, 0.7, 0.3]))
    assert not check.passed
    assert check.failure_index == 2


def test_check_linear_sequences():
    geometric = 0.5 ** np.arange(20)
    check = check_linear(geometric)
    assert check.passed and check.c == pytest.approx(0.5, rel=1e-12)
    # consecutive harmonic ratios approach 1; long traces must fail
    long_harmonic = 1.0 / (np.arange(2_000_001) + 1.0)
    assert not check_linear(long_harmonic).passed
    short_harmonic = 1.0 / (np.arange(50) + 1.0)
    assert check_linear(short_harmonic).passed


def test_check_linear_rejects_non_positive():
    check = check_linear(np.array([1.0, 0.0, 0.5]))
    assert not check.passed and check.failure_index == 1


def test_appendix_inequalities_report():
    clamp = ClampConfig(rho=1e-4)
    report = check_appendix_inequalities(clamp, n_points=4001)
    assert report.passed
    assert report.max_loss_violation <= 1e-12
    assert report.max_step_violation <= 1e-12
    # the step bound is attained where the clamp is active
    assert report.max_step_ratio == pytest.approx(1.0 / (2.0 * clamp.rho), rel=1e-9)


def test_appendix_symmetric_point_by_hand():
    # y=1, F=0: g^2/h = 1 and l = log 2
    clamp = ClampConfig(rho=1e-4)
    g, h = grad_quad(LossKind.logistic(), 1.0, 0.0, clamp)
    assert g * g / h == pytest.approx(1.0, abs=1e-12)
    assert g * g / h >= np.log(2.0)


def test_appendix_label_symmetry():
    clamp = ClampConfig(rho=1e-3)
    grid = np.linspace(-15.0, 15.0, 2001)  # symmetric grid
    report_full = check_appendix_inequalities(clamp, f_grid=grid)
    assert report_full.passed
    # mirrored scores with flipped labels give the same extreme ratio
    g1, h1 = grad_quad(LossKind.logistic(), 1.0, -8.0, clamp)
    g0, h0 = grad_quad(LossKind.logistic(), 0.0, 8.0, clamp)
    assert abs(g1) / h1 == pytest.approx(abs(g0) / h0, rel=1e-12)
