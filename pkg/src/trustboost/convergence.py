"""Executable convergence checks: one-instance traces, rate recurrences,
and the clamped-logistic inequalities.

The one-instance simulator applies the method's exact step each iteration
(no learner fitting error): -nu*g for first-order descent, -nu*g/h for the
Newton step, -g/(h+mu) with frozen mu for the trust-region step.  Rate
checkers verify the recurrences eps_t <= eps_{t-1} - c*eps_{t-1}^2 (which
implies an O(1/T) bound) and eps_t <= c*eps_{t-1} with c < 1 (a linear
rate), and the implied closed-form bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .boosting import BaselineKind
from .errors import DomainError, HessianNotPositiveError, InfeasibleRadiusError
from .losses import ClampConfig, LossKind, clamp_probability, grad_quad, loss_value

# A linear-rate factor this close to 1 is not meaningfully geometric.
LINEAR_RATE_MARGIN = 1e-6
# Relative slack for the closed-form bound re-checks.
BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class LossTrace:
    """Per-iteration losses (length iters+1, including the start) and raw scores."""

    method: str
    losses: np.ndarray
    scores: np.ndarray
    params: dict = field(default_factory=dict)

    @property
    def final_score(self) -> float:
        return float(self.scores[-1])


@dataclass(frozen=True)
class RateCheck:
    passed: bool
    c: float
    failure_index: int | None = None
    final_value: float = float("nan")
    bound_value: float = float("nan")

    def summary(self) -> str:
        if self.failure_index is not None:
            return f"FAIL (trace violates preconditions at index {self.failure_index})"
        status = "PASS" if self.passed else "FAIL"
        return f"{status} (c={self.c:.6g}, final={self.final_value:.6g}, bound={self.bound_value:.6g})"


def run_one_instance(
    loss: LossKind,
    y: float,
    f0: float,
    method: BaselineKind,
    iters: int,
    mu: float = 1.0,
    clamp: ClampConfig = ClampConfig(),
) -> LossTrace:
    """Simulate scalar boosting on a single labelled instance.

    ``mu`` is the frozen trust-region shift (the controller is deliberately
    not run here so the recurrences stay analysable).  The newton method
    raises the moment h <= 0.
    """
    if iters < 1:
        raise DomainError(f"iters must be >= 1, got {iters}")
    f = float(f0)
    losses = [float(loss_value(loss, y, f))]
    scores = [f]
    for _ in range(iters):
        g, h = grad_quad(loss, y, f, clamp)
        if method.name == "trboost":
            denom = h + mu
            if denom <= 0.0:
                raise InfeasibleRadiusError(
                    f"h + mu = {denom!r} not positive; raise the frozen mu"
                )
            step = -g / denom
        elif method.name == "gbdt":
            step = -method.nu * g
        else:
            if h <= 0.0:
                raise HessianNotPositiveError(
                    f"Hessian not positive ({h!r}) for loss {loss.flag()!r}"
                )
            step = -method.nu * g / h
        f += step
        losses.append(float(loss_value(loss, y, f)))
        scores.append(f)
    return LossTrace(
        method=method.name,
        losses=np.asarray(losses),
        scores=np.asarray(scores),
        params={"y": y, "f0": f0, "mu": mu, "nu": method.nu, "loss": loss.flag()},
    )


def _trace_values(trace) -> np.ndarray:
    values = trace.losses if isinstance(trace, LossTrace) else trace
    eps = np.asarray(values, dtype=float)
    if eps.ndim != 1 or eps.size < 2:
        raise DomainError("a trace needs at least two entries")
    return eps


def check_sublinear(trace) -> RateCheck:
    """Largest c with eps_t <= eps_{t-1} - c*eps_{t-1}^2, plus the O(1/T) bound.

    Requires a positive, non-increasing trace; a violation fails with its
    index.  Passes when c > 0 and eps_T <= eps_0/(1 + c*eps_0*T).
    """
    eps = _trace_values(trace)
    for i, v in enumerate(eps):
        if v <= 0.0:
            return RateCheck(passed=False, c=0.0, failure_index=i)
    increases = np.flatnonzero(eps[1:] > eps[:-1])
    if increases.size:
        return RateCheck(passed=False, c=0.0, failure_index=int(increases[0]) + 1)
    c = float(np.min((eps[:-1] - eps[1:]) / (eps[:-1] ** 2)))
    t_total = eps.size - 1
    bound = eps[0] / (1.0 + c * eps[0] * t_total)
    passed = c > 0.0 and eps[-1] <= bound * (1.0 + BOUND_SLACK)
    return RateCheck(passed=passed, c=c, final_value=float(eps[-1]), bound_value=float(bound))


def check_linear(trace) -> RateCheck:
    """Smallest geometric factor c = max eps_t/eps_{t-1}, plus the c^T bound.

    Passes when c stays below 1 by at least 1e-6 and eps_T <= eps_0 * c^T.
    """
    eps = _trace_values(trace)
    for i, v in enumerate(eps):
        if v <= 0.0:
            return RateCheck(passed=False, c=0.0, failure_index=i)
    ratios = eps[1:] / eps[:-1]
    c = float(np.max(ratios))
    t_total = eps.size - 1
    bound = eps[0] * c**t_total
    passed = c < 1.0 - LINEAR_RATE_MARGIN and eps[-1] <= bound * (1.0 + BOUND_SLACK)
    return RateCheck(passed=passed, c=c, final_value=float(eps[-1]), bound_value=float(bound))


@dataclass(frozen=True)
class AppendixReport:
    """Pointwise verification of the clamped-logistic inequalities.

    Over a grid of raw scores and both labels, with l, g, h all evaluated at
    the clamped probability: g^2/h >= l, and |g/h| <= 1/(2*rho) with the
    bound attained where the clamp is active.
    """

    max_loss_violation: float
    max_step_violation: float
    max_step_ratio: float
    step_bound: float
    grid_size: int
    slack: float

    @property
    def passed(self) -> bool:
        return self.max_loss_violation <= self.slack and self.max_step_violation <= self.slack

    def summary_lines(self) -> list[str]:
        status = lambda v: "PASS" if v <= self.slack else "FAIL"
        return [
            f"loss-comparison g^2/h >= l: {status(self.max_loss_violation)} "
            f"(max violation {self.max_loss_violation:.3e})",
            f"step-bound |g/h| <= 1/(2*rho): {status(self.max_step_violation)} "
            f"(max violation {self.max_step_violation:.3e}, "
            f"max ratio {self.max_step_ratio:.6g} vs bound {self.step_bound:.6g})",
        ]


def check_appendix_inequalities(
    clamp: ClampConfig,
    f_grid=None,
    n_points: int = 10000,
    f_range: tuple[float, float] = (-20.0, 20.0),
    slack: float = 1e-12,
) -> AppendixReport:
    """Evaluate the inequalities on a score grid for both labels.

    Internally uses extended precision so that the tight 1/(2*rho) equality
    case does not spill rounding noise past the violation budget.
    """
    if f_grid is None:
        f_grid = np.linspace(f_range[0], f_range[1], n_points)
    f = np.asarray(f_grid, dtype=np.longdouble)
    if f.size < 1 or not np.all(np.isfinite(f)):
        raise DomainError("grid must be finite and non-empty")
    one = np.longdouble(1.0)
    rho = np.longdouble(clamp.rho)
    guard = np.longdouble(1e-15)
    # p = 1/(1 + e^(-2F)) evaluated stably in extended precision.
    p = np.where(
        f >= 0,
        one / (one + np.exp(-2.0 * f)),
        np.exp(2.0 * f) / (one + np.exp(2.0 * f)),
    )

    max_loss_violation = np.longdouble(0.0)
    max_step_violation = np.longdouble(0.0)
    max_ratio = np.longdouble(0.0)
    bound = one / (2.0 * rho)
    for y in (np.longdouble(0.0), np.longdouble(1.0)):
        pc = p.copy()
        if y == 0.0:
            pc = np.minimum(pc, one - rho)
        else:
            pc = np.maximum(pc, rho)
        pc = np.clip(pc, guard, one - guard)
        g = 2.0 * (pc - y)
        h = 4.0 * pc * (one - pc)
        ell = np.where(y == 1.0, -np.log(pc), -np.log(one - pc))
        max_loss_violation = max(max_loss_violation, np.max(ell - g * g / h))
        ratio = np.abs(g) / h
        max_ratio = max(max_ratio, np.max(ratio))
        max_step_violation = max(max_step_violation, np.max(ratio - bound))

    return AppendixReport(
        max_loss_violation=float(max(max_loss_violation, 0.0)),
        max_step_violation=float(max(max_step_violation, 0.0)),
        max_step_ratio=float(max_ratio),
        step_bound=float(bound),
        grid_size=int(f.size),
        slack=slack,
    )
