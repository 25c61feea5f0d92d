"""Scalar trust-region subproblems and the adaptive radius controller.

Each boosting iteration solves, per instance, min_z g*z + (1/2)*b*z^2
subject to |z| <= r.  The solution always has the shifted-Newton form
z = -g/(b + mu) for some mu >= 0, so in practice the radius is steered
through the single shift mu (larger mu, smaller step).  Two approximation
ratios compare the realised loss drop against the model's prediction (r1)
or against the mean step size (r2); out-of-band ratios shrink the radius
by multiplying mu (or alpha and beta on the tree path) by gamma.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleRadiusError

# Predicted reductions / mean steps below this count as zero and force the
# sentinel ratio 0 (shrink + reject).
ZERO_DENOM = 1e-15

RATIO_KINDS = ("r1", "r2")


@dataclass(frozen=True)
class TrustParams:
    """Controller constants.

    A ratio inside [eps1, eps2] leaves the radius alone; anything outside
    multiplies the shift by gamma (capped at mu_max).  A learner is admitted
    only when its ratio exceeds eta.  eta above eps1 is tolerated so that
    admission can be gated off entirely in experiments.
    """

    eps1: float = 0.9
    eps2: float = 1.1
    gamma: float = 1.01
    eta: float = 0.0
    mu_max: float = 1e6

    def __post_init__(self):
        if not (0.0 <= self.eps1 < 1.0 < self.eps2):
            raise DomainError(f"need 0 <= eps1 < 1 < eps2, got eps1={self.eps1} eps2={self.eps2}")
        if not self.gamma > 1.0:
            raise DomainError(f"gamma must exceed 1, got {self.gamma}")
        if self.eta < 0.0:
            raise DomainError(f"eta must be non-negative, got {self.eta}")
        if not self.mu_max > 0.0:
            raise DomainError(f"mu_max must be positive, got {self.mu_max}")


@dataclass(frozen=True)
class TrustState:
    """Mutable-by-replacement controller state.

    mu drives the generic-learner path; alpha and beta drive the tree path
    (per-leaf shift alpha*n + beta).  All three only ever grow, capped at
    the configured maximum.
    """

    mu: float = 1.0
    alpha: float = 0.1
    beta: float = 10.0
    iteration: int = 0

    def __post_init__(self):
        if self.mu < 0 or self.alpha < 0 or self.beta < 0:
            raise DomainError("mu, alpha and beta must be non-negative")


def solve_scalar_subproblem(g: float, b: float, r: float) -> tuple[float, float]:
    """Minimise g*z + (1/2)*b*z^2 over |z| <= r.

    Returns (z, mu_i) with mu_i >= 0 such that z = -g/(b + mu_i) whenever
    g != 0: the unconstrained Newton point -g/b when b > 0 and |g/b| <= r,
    otherwise the boundary point sign(-g)*r with mu_i = |g|/r - b.  For
    g = 0 the minimiser is 0 when b >= 0 and +r (tie-break) when b < 0.
    """
    if not (np.isfinite(g) and np.isfinite(b) and np.isfinite(r)):
        raise DomainError("subproblem inputs must be finite")
    if r <= 0:
        raise DomainError(f"radius must be positive, got {r}")
    g = float(g)
    b = float(b)
    r = float(r)
    if g == 0.0:
        if b >= 0.0:
            return 0.0, 0.0
        return r, -b
    if b > 0.0 and abs(g / b) <= r:
        return -g / b, 0.0
    z = -r if g > 0 else r
    return z, abs(g) / r - b


def target_values(grads, quads, mu: float) -> np.ndarray:
    """Elementwise fit targets z_i = -g_i/(b_i + mu)."""
    g = np.asarray(grads, dtype=float)
    b = np.asarray(quads, dtype=float)
    if g.shape != b.shape:
        raise DomainError("gradient and quadratic-coefficient vectors differ in length")
    denom = b + mu
    if np.any(denom <= 0.0):
        raise InfeasibleRadiusError(
            f"b + mu must be positive everywhere (min {denom.min()!r}); raise mu"
        )
    return -g / denom


def ratio_r1(loss_prev: float, loss_new: float, grads, quads, outputs) -> float:
    """Actual over model-predicted loss reduction.

    Denominator is -(1/n) * sum(g_i * z_i + 0.5 * b_i * z_i^2); when it is
    non-positive or below 1e-15 the sentinel 0 is returned, which downstream
    both shrinks the radius and rejects the learner.
    """
    g = np.asarray(grads, dtype=float)
    b = np.asarray(quads, dtype=float)
    z = np.asarray(outputs, dtype=float)
    if not (g.shape == b.shape == z.shape):
        raise DomainError("ratio inputs differ in length")
    if g.size < 1:
        raise DomainError("ratio needs at least one instance")
    predicted = -float(np.mean(g * z + 0.5 * b * z * z))
    if not predicted >= ZERO_DENOM:
        return 0.0
    return (loss_prev - loss_new) / predicted


def ratio_r2(loss_prev: float, loss_new: float, outputs) -> float:
    """Actual loss reduction over the mean absolute step, sentinel 0 on degenerate steps."""
    z = np.asarray(outputs, dtype=float)
    if z.size < 1:
        raise DomainError("ratio needs at least one instance")
    denom = float(np.mean(np.abs(z)))
    if denom < ZERO_DENOM:
        return 0.0
    return (loss_prev - loss_new) / denom


def update_radius(state: TrustState, params: TrustParams, rho: float) -> TrustState:
    """Return the next controller state for the observed ratio.

    Ratios below eps1 or above eps2 multiply mu, alpha and beta by gamma
    (capped at mu_max); in-band ratios leave them unchanged.  The iteration
    counter always advances, including for rejected iterations.
    """
    if rho < params.eps1 or rho > params.eps2:
        scale = params.gamma
    else:
        scale = 1.0
    return dataclasses.replace(
        state,
        mu=min(state.mu * scale, params.mu_max),
        alpha=min(state.alpha * scale, params.mu_max),
        beta=min(state.beta * scale, params.mu_max),
        iteration=state.iteration + 1,
    )


def admit(rho: float, eta: float) -> bool:
    """A learner joins the ensemble only on strict improvement past eta."""
    return rho > eta
