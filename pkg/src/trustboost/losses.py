"""Loss functions: value, gradient and quadratic coefficient per instance.

Raw scores F are unbounded reals.  Classification uses the probability map
p = e^F / (e^F + e^-F), a sigmoid in 2F, and the per-instance log loss
l = y*log(1/p) + (1-y)*log(1/(1-p)) whose derivatives are g = 2(p - y) and
b = 4p(1-p).  Regression losses: squared (F-y)^2 with b = 2, absolute |F-y|
with b = 0, and Huber which is quadratic inside |F-y| <= delta and linear
outside (b = 0 there).  The absolute and Huber-exterior b = 0 cases are the
non-positive-curvature cases the trust-region machinery exists for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import DomainError

LOSS_NAMES = ("logistic", "squared", "absolute", "huber")

# Keeps p strictly inside (0, 1) in float64 so that b = 4p(1-p) > 0 holds
# even where the one-sided clamp does not apply.
_P_GUARD = 1e-15


@dataclass(frozen=True)
class ClampConfig:
    """One-sided probability clamp.

    Wrong-side predictions are pulled back: p := 1-rho when y=0 and
    p > 1-rho, p := rho when y=1 and p < rho.  Keeps the curvature bounded
    away from zero on mispredicted instances, which bounds the Newton step
    by 1/(2*rho).
    """

    rho: float = 1e-4

    def __post_init__(self):
        if not (0.0 < self.rho < 0.5):
            raise DomainError(f"clamp rho must lie in (0, 0.5), got {self.rho}")


@dataclass(frozen=True)
class LossKind:
    """Tagged loss selector; ``delta`` is only meaningful for Huber."""

    name: str
    delta: float = 1.0

    def __post_init__(self):
        if self.name not in LOSS_NAMES:
            raise DomainError(f"unknown loss {self.name!r}, expected one of {LOSS_NAMES}")
        if self.name == "huber" and not (np.isfinite(self.delta) and self.delta > 0):
            raise DomainError(f"huber delta must be a positive real, got {self.delta}")

    @staticmethod
    def logistic() -> "LossKind":
        return LossKind("logistic")

    @staticmethod
    def squared() -> "LossKind":
        return LossKind("squared")

    @staticmethod
    def absolute() -> "LossKind":
        return LossKind("absolute")

    @staticmethod
    def huber(delta: float = 1.0) -> "LossKind":
        return LossKind("huber", delta)

    @staticmethod
    def parse(spec: str) -> "LossKind":
        """Parse a CLI loss string: logloss | l2 | l1 | huber:<delta>."""
        s = spec.strip().lower()
        if s == "logloss":
            return LossKind.logistic()
        if s == "l2":
            return LossKind.squared()
        if s == "l1":
            return LossKind.absolute()
        if s == "huber":
            return LossKind.huber()
        if s.startswith("huber:"):
            try:
                return LossKind.huber(float(s.split(":", 1)[1]))
            except ValueError as exc:
                raise DomainError(f"bad huber delta in {spec!r}") from exc
        raise DomainError(f"unknown loss {spec!r}, expected logloss | l2 | l1 | huber:<delta>")

    def flag(self) -> str:
        """Inverse of parse()."""
        if self.name == "logistic":
            return "logloss"
        if self.name == "squared":
            return "l2"
        if self.name == "absolute":
            return "l1"
        return f"huber:{self.delta!r}"

    @property
    def is_classification(self) -> bool:
        return self.name == "logistic"

    @property
    def can_zero_quad(self) -> bool:
        """True when the quadratic coefficient can be <= 0 for some input."""
        return self.name in ("absolute", "huber")


def _finite_array(x, what: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"non-finite {what}")
    return arr


def _check_binary(y: np.ndarray):
    if not np.all((y == 0.0) | (y == 1.0)):
        raise DomainError("logistic loss requires labels in {0, 1}")


def _maybe_scalar(out: np.ndarray, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return float(out)
    return out


def probability(f):
    """Probability of class 1 for raw score F: 1/(1 + e^(-2F)), stable for large |F|."""
    arr = _finite_array(f, "score")
    return _maybe_scalar(expit(2.0 * arr), f)


def clamp_probability(p, y, clamp: ClampConfig):
    """Apply the one-sided clamp, then guard p into (0, 1) strictly."""
    p = np.asarray(p, dtype=float)
    y = np.asarray(y, dtype=float)
    p = np.where((y == 0.0) & (p > 1.0 - clamp.rho), 1.0 - clamp.rho, p)
    p = np.where((y == 1.0) & (p < clamp.rho), clamp.rho, p)
    return np.clip(p, _P_GUARD, 1.0 - _P_GUARD)


def loss_value(kind: LossKind, y, f):
    """Per-instance loss l(y, F).  Vectorises over numpy inputs."""
    yv = _finite_array(y, "label")
    fv = _finite_array(f, "score")
    if kind.name == "logistic":
        _check_binary(yv)
        sign = 2.0 * yv - 1.0
        # -log p for y=1 and -log(1-p) for y=0, both as log(1 + e^x).
        out = np.logaddexp(0.0, -2.0 * sign * fv)
    elif kind.name == "squared":
        out = (fv - yv) ** 2
    elif kind.name == "absolute":
        out = np.abs(fv - yv)
    else:
        r = np.abs(fv - yv)
        out = np.where(r <= kind.delta, 0.5 * r * r, kind.delta * (r - 0.5 * kind.delta))
    return _maybe_scalar(out, y, f)


def grad_quad(kind: LossKind, y, f, clamp: ClampConfig = ClampConfig()):
    """Gradient g and quadratic coefficient b of the loss at raw score F.

    The clamp applies to the logistic loss only.  Returns (g, b) with the
    same shape as the broadcast inputs.
    """
    yv = _finite_array(y, "label")
    fv = _finite_array(f, "score")
    if kind.name == "logistic":
        _check_binary(yv)
        p = clamp_probability(expit(2.0 * fv), yv, clamp)
        g = 2.0 * (p - yv)
        b = 4.0 * p * (1.0 - p)
    elif kind.name == "squared":
        g = 2.0 * (fv - yv)
        b = np.full_like(g, 2.0)
    elif kind.name == "absolute":
        g = np.sign(fv - yv)
        b = np.zeros_like(g)
    else:
        r = fv - yv
        g = np.clip(r, -kind.delta, kind.delta)
        b = np.where(np.abs(r) <= kind.delta, 1.0, 0.0)
    return _maybe_scalar(g, y, f), _maybe_scalar(b, y, f)
