import numpy as np
import pytest

from trustboost import ClampConfig, DomainError, LossKind, grad_quad, loss_value, probability


def test_logistic_loss_at_symmetry():
    assert loss_value(LossKind.logistic(), 1.0, 0.0) == pytest.approx(np.log(2.0), rel=1e-12)


def test_squared_zero_residual():
    assert loss_value(LossKind.squared(), 3.0, 3.0) == 0.0


def test_huber_exterior_hand_value():
    # delta * (|r| - delta/2) with r = 2, delta = 1
    assert loss_value(LossKind.huber(1.0), 0.0, 2.0) == pytest.approx(1.5, abs=1e-15)


def test_huber_interior_is_half_square():
    assert loss_value(LossKind.huber(1.0), 0.0, 0.4) == pytest.approx(0.08, abs=1e-15)


def test_probability_values():
    assert probability(0.0) == 0.5
    assert probability(0.5) == pytest.approx(1.0 / (1.0 + np.exp(-1.0)), rel=1e-12)
    # monotone approach to 1
    assert probability(5.0) < probability(10.0) < probability(50.0) <= 1.0
    assert probability(50.0) > 1.0 - 1e-12


def test_grad_quad_logistic_symmetric_point():
    g, b = grad_quad(LossKind.logistic(), 1.0, 0.0)
    assert g == pytest.approx(-1.0, abs=1e-15)
    assert b == pytest.approx(1.0, abs=1e-15)


def test_grad_quad_absolute_sign():
    g, b = grad_quad(LossKind.absolute(), 0.0, 5.0)
    assert (g, b) == (1.0, 0.0)
    g0, _ = grad_quad(LossKind.absolute(), 2.0, 2.0)
    assert g0 == 0.0


def test_grad_quad_logistic_clamped():
    clamp = ClampConfig(rho=1e-4)
    g, b = grad_quad(LossKind.logistic(), 1.0, -20.0, clamp)
    assert g == pytest.approx(2.0 * (1e-4 - 1.0), rel=1e-12)
    assert b == pytest.approx(4.0 * 1e-4 * (1.0 - 1e-4), rel=1e-12)


def test_grad_quad_squared_and_huber():
    g, b = grad_quad(LossKind.squared(), 1.0, 4.0)
    assert (g, b) == (6.0, 2.0)
    g, b = grad_quad(LossKind.huber(1.0), 0.0, 3.0)
    assert (g, b) == (1.0, 0.0)
    g, b = grad_quad(LossKind.huber(1.0), 0.0, 0.25)
    assert (g, b) == (0.25, 1.0)


def test_non_finite_inputs_rejected():
    with pytest.raises(DomainError):
        loss_value(LossKind.squared(), 0.0, np.inf)
    with pytest.raises(DomainError):
        grad_quad(LossKind.squared(), np.nan, 0.0)
    with pytest.raises(DomainError):
        loss_value(LossKind.logistic(), 0.5, 0.0)


def test_loss_parse_round_trip():
    for flag in ("logloss", "l2", "l1", "huber:0.5"):
        kind = LossKind.parse(flag)
        assert LossKind.parse(kind.flag()) == kind
    with pytest.raises(DomainError):
        LossKind.parse("l3")
    with pytest.raises(DomainError):
        LossKind.huber(0.0)
    with pytest.raises(DomainError):
        ClampConfig(rho=0.5)


def test_gradient_matches_finite_differences():
    # central differences of loss_value vs the reported g, away from kinks/clamps
    rng = np.random.default_rng(7)
    eps = 1e-6
    cases = []
    for _ in range(50):
        y = rng.uniform(-2, 2)
        f = rng.uniform(-2, 2)
        cases.append((LossKind.squared(), y, f))
        cases.append((LossKind.logistic(), float(rng.integers(0, 2)), rng.uniform(-3, 3)))
        # keep the Huber probe inside the quadratic region
        cases.append((LossKind.huber(1.0), y, y + rng.uniform(-0.9, 0.9)))
    for kind, y, f in cases:
        g, _ = grad_quad(kind, y, f)
        fd = (loss_value(kind, y, f + eps) - loss_value(kind, y, f - eps)) / (2 * eps)
        assert g == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_logistic_clamped_quad_positive_and_step_bounded():
    clamp = ClampConfig(rho=1e-4)
    f = np.linspace(-20.0, 20.0, 2001)
    for y in (0.0, 1.0):
        g, b = grad_quad(LossKind.logistic(), np.full_like(f, y), f, clamp)
        assert np.all(b > 0.0)
        assert np.max(np.abs(g) / b) <= 1.0 / (2.0 * clamp.rho) + 1e-8


def test_logistic_clamped_square_over_quad_dominates_loss():
    clamp = ClampConfig(rho=1e-4)
    f = np.linspace(-20.0, 20.0, 2001)
    for y in (0.0, 1.0):
        labels = np.full_like(f, y)
        g, b = grad_quad(LossKind.logistic(), labels, f, clamp)
        ell = loss_value(LossKind.logistic(), labels, f)
        assert np.all(g * g / b >= ell - 1e-12)


def test_zero_quad_cases_exact():
    # non-positive-curvature flags: absolute everywhere, Huber outside delta
    rng = np.random.default_rng(3)
    y = rng.normal(size=100)
    f = y + rng.normal(size=100)
    _, b_abs = grad_quad(LossKind.absolute(), y, f)
    assert np.all(b_abs == 0.0)
    _, b_hub = grad_quad(LossKind.huber(0.5), y, f)
    outside = np.abs(f - y) > 0.5
    assert np.all(b_hub[outside] == 0.0)
    assert np.all(b_hub[~outside] == 1.0)
