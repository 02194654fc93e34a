"""Training objectives for interval networks.

Seven cost functions sharing the signature
``cost(targets, intervals, R, spec) -> float`` plus a dispatch entry point.
Every cost is negatively oriented for training (lower is better) and pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from . import backend, metrics

KINDS = ("cwc-mult", "cwc-add", "cwc-cont", "wan", "marin", "zhang-dic", "cwfdc")


@dataclass(frozen=True)
class CostSpec:
    """Choice of cost function with all hyperparameters.

    ``beta2``, ``sigma_p`` and ``delta`` default to batch-dependent values
    (1/n, 1/(n*R) and alpha/50 respectively) when left as None.
    """

    kind: str
    alpha: float
    eta: float = 50.0
    lambda_w: float = 1.0
    gamma_w: float = 1.0
    beta1: float = 1.0
    beta2: float | None = None
    eta_marin: float = 50.0
    sigma_p: float | None = None
    rho: float = 1.0
    beta: float = 1000.0
    delta: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown cost kind {self.kind!r}; expected one of {KINDS}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.kind == "cwfdc" and self.beta <= 200:
            raise ValueError("cwfdc requires beta > 200")
        if self.rho < 0:
            raise ValueError("rho must be nonnegative")
        if self.delta is not None and self.delta < 0:
            raise ValueError("delta must be nonnegative")

    @property
    def pinc(self) -> float:
        return 1.0 - self.alpha

    @property
    def coverage_margin(self) -> float:
        """delta, defaulting to alpha/50."""
        return self.alpha / 50.0 if self.delta is None else self.delta

    @classmethod
    def from_dict(cls, data: dict) -> "CostSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown CostSpec keys: {sorted(unknown)}")
        return cls(**data)


def _gamma_step(picp_value: float, pinc: float) -> float:
    return 1.0 if picp_value < pinc else 0.0


@dataclass(frozen=True)
class _BatchStats:
    """Per-batch sums from the kernel, with the derived per-batch metrics.

    This is the hot path: one fused pass over the batch instead of one pass
    per metric. Agreement with the metrics module is covered by tests.
    """

    n: int
    picp: float
    pinaw: float
    pinafd: float
    raw_width_sum: float
    mid_sq_sum: float
    below_sum: float
    above_sum: float


def _stats(targets, intervals, R) -> _BatchStats:
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    t, lower, upper = metrics._as_batch(targets, intervals)
    cov, clamped, raw, fail, miss, mid_sq, below, above = backend.pi_stats(
        np.ascontiguousarray(t), np.ascontiguousarray(lower), np.ascontiguousarray(upper)
    )
    n = t.size
    return _BatchStats(
        n=n,
        picp=cov / n,
        pinaw=clamped / (n * R),
        pinafd=fail / (R * miss + metrics.EPS_FAILURE_DISTANCE),
        raw_width_sum=raw,
        mid_sq_sum=mid_sq,
        below_sum=below,
        above_sum=above,
    )


def cwc_multiplicative(targets, intervals, R, spec: CostSpec) -> float:
    """Original LUBE criterion: width multiplied by the coverage penalty.

    Carries the documented zero-width pathology: PINAW = 0 zeroes the whole
    cost regardless of coverage.
    """
    s = _stats(targets, intervals, R)
    g = _gamma_step(s.picp, spec.pinc)
    return s.pinaw * (1.0 + g * math.exp(spec.eta * (spec.pinc - s.picp)))


def cwc_additive(targets, intervals, R, spec: CostSpec) -> float:
    """LUBE criterion with independent width and penalty terms."""
    s = _stats(targets, intervals, R)
    g = _gamma_step(s.picp, spec.pinc)
    return s.pinaw + g * math.exp(spec.eta * (spec.pinc - s.picp))


def cwc_continuous(targets, intervals, R, spec: CostSpec) -> float:
    """Additive criterion with the penalty shifted to vanish at the nominal
    coverage, removing the jump discontinuity at PICP = PINC."""
    s = _stats(targets, intervals, R)
    if s.picp < spec.pinc:
        return s.pinaw + math.exp(spec.eta * (spec.pinc - s.picp)) - 1.0
    return s.pinaw


def wan_cost(targets, intervals, R, spec: CostSpec) -> float:
    """Weighted sum of the absolute average interval score and the absolute
    average coverage error."""
    s = _stats(targets, intervals, R)
    s_av = (
        -2.0 * spec.alpha * s.raw_width_sum - 4.0 * (s.below_sum + s.above_sum)
    ) / s.n
    return spec.lambda_w * abs(s_av) + spec.gamma_w * abs(s.picp - spec.pinc)


def marin_cost(targets, intervals, R, spec: CostSpec) -> float:
    """Width plus squared mid-interval deviation plus an exponential
    coverage term that also penalizes overcoverage."""
    s = _stats(targets, intervals, R)
    beta2 = spec.beta2 if spec.beta2 is not None else 1.0 / s.n
    return (
        spec.beta1 * s.pinaw
        + beta2 * s.mid_sq_sum
        + math.exp(-spec.eta_marin * (s.picp - spec.pinc))
    )


def zhang_dic(targets, intervals, R, spec: CostSpec) -> float:
    """Deviation information-based criterion: width plus a linear (rather
    than exponential) miss penalty, gated on undercoverage."""
    s = _stats(targets, intervals, R)
    sigma_p = (
        spec.sigma_p if spec.sigma_p is not None else metrics.default_sigma_p(s.n, R)
    )
    g = _gamma_step(s.picp, spec.pinc)
    return s.pinaw + g * sigma_p * (s.below_sum + s.above_sum)


def cwfdc(targets, intervals, R, spec: CostSpec) -> float:
    """Coverage width failure distance criterion.

    PINAW + rho*PINAFD + beta*(1 - alpha + delta - PICP)^2: smooth in PICP,
    with its coverage minimum at PINC + delta and overcoverage penalized
    symmetrically.
    """
    s = _stats(targets, intervals, R)
    gap = spec.pinc + spec.coverage_margin - s.picp
    return s.pinaw + spec.rho * s.pinafd + spec.beta * gap * gap


_DISPATCH = {
    "cwc-mult": cwc_multiplicative,
    "cwc-add": cwc_additive,
    "cwc-cont": cwc_continuous,
    "wan": wan_cost,
    "marin": marin_cost,
    "zhang-dic": zhang_dic,
    "cwfdc": cwfdc,
}


def evaluate(spec: CostSpec, targets, intervals, R) -> float:
    """Route to the cost function named by ``spec.kind``."""
    try:
        fn = _DISPATCH[spec.kind]
    except KeyError:
        raise ValueError(f"unknown cost kind {spec.kind!r}") from None
    return fn(targets, intervals, R, spec)


def selection_cost(spec: CostSpec, targets, intervals, R) -> float:
    """Model-selection value used when picking among restarts or sizes.

    Each family selects on its own headline quantity: the CWC variants on
    their cost, Wan on the weighted score, Marin on PINAW + ||e||^2/n,
    Zhang on DIC, and cwfdc on PINAW + PINAFD.
    """
    if spec.kind == "marin":
        t = np.asarray(targets, dtype=float)
        w = metrics.pinaw(intervals, R)
        e = metrics.mid_deviation(targets, intervals)
        return w + e * e / t.size
    if spec.kind == "cwfdc":
        w = metrics.pinaw(intervals, R)
        fd = metrics.pinafd(targets, intervals, R)
        return w + fd
    return evaluate(spec, targets, intervals, R)
