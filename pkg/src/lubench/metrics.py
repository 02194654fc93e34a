"""Prediction-interval quality metrics.

All functions are pure and operate on batches: ``targets`` is a 1-d float
array and ``intervals`` is a ``(lower, upper)`` pair of 1-d float arrays in
target units. Raw network output may have upper < lower ("crossed" bounds);
the policy here is: coverage is tested against [min, max] of the two bounds,
while width is clamped to zero so a crossed interval never earns a
negative-width reward.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

EPS_FAILURE_DISTANCE = 1e-10

IntervalBatch = tuple[np.ndarray, np.ndarray]


def _as_batch(targets, intervals) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    t = np.asarray(targets, dtype=float)
    lower = np.asarray(intervals[0], dtype=float)
    upper = np.asarray(intervals[1], dtype=float)
    if t.size == 0:
        raise ValueError("empty input")
    if t.shape != lower.shape or t.shape != upper.shape:
        raise ValueError(
            f"length mismatch: targets {t.shape}, lower {lower.shape}, upper {upper.shape}"
        )
    return t, lower, upper


def coverage_flags(targets, intervals) -> np.ndarray:
    """Per-sample coverage indicator: 1 iff the target lies inside the
    closed interval spanned by the two bounds (in either order)."""
    t, lower, upper = _as_batch(targets, intervals)
    lo = np.minimum(lower, upper)
    hi = np.maximum(lower, upper)
    return ((t >= lo) & (t <= hi)).astype(np.int64)


def picp(targets, intervals) -> float:
    """Prediction interval coverage probability: fraction of covered targets."""
    return float(coverage_flags(targets, intervals).mean())


def pinaw(intervals, R: float) -> float:
    """Normalized average width: mean clamped width divided by the target range."""
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    lower = np.asarray(intervals[0], dtype=float)
    upper = np.asarray(intervals[1], dtype=float)
    widths = np.maximum(upper - lower, 0.0)
    return float(widths.mean() / R)


def pinafd(targets, intervals, R: float, eps: float = EPS_FAILURE_DISTANCE) -> float:
    """Normalized average failure distance.

    Sum over uncovered samples of the distance from the target to the nearest
    bound, divided by (R * number of misses + eps). The eps term makes the
    value exactly zero at 100% coverage instead of 0/0.
    """
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    t, lower, upper = _as_batch(targets, intervals)
    covered = coverage_flags(targets, intervals).astype(bool)
    miss = ~covered
    dist = np.minimum(np.abs(t - upper), np.abs(lower - t))
    total = float(dist[miss].sum())
    n_miss = int(miss.sum())
    return total / (R * n_miss + eps)


def ace(picp_value: float, pinc: float) -> float:
    """Average coverage error: achieved minus nominal coverage."""
    if not (0.0 <= picp_value <= 1.0 and 0.0 <= pinc <= 1.0):
        raise ValueError("picp and pinc must lie in [0, 1]")
    return picp_value - pinc


def interval_score(targets, intervals, alpha: float) -> float:
    """Average Winkler-style interval score (negatively oriented).

    Per sample: -2*alpha*width, minus 4*(lower - t) when the target falls
    below the lower bound, minus 4*(t - upper) when it falls above the upper
    bound. Width here is the raw (upper - lower), unclamped.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    t, lower, upper = _as_batch(targets, intervals)
    s = -2.0 * alpha * (upper - lower)
    s -= 4.0 * np.maximum(lower - t, 0.0)
    s -= 4.0 * np.maximum(t - upper, 0.0)
    return float(s.mean())


def mid_deviation(targets, intervals) -> float:
    """Euclidean norm of the deviations of targets from interval midpoints."""
    t, lower, upper = _as_batch(targets, intervals)
    dev = t - 0.5 * (upper + lower)
    return float(np.sqrt(np.sum(dev * dev)))


def pun(targets, intervals, sigma_p: float) -> float:
    """Linear miss penalty: sigma_p times the summed bound violations,
    (lower - t) for targets below the lower bound and (t - upper) above."""
    if sigma_p <= 0:
        raise ValueError(f"sigma_p must be positive, got {sigma_p}")
    t, lower, upper = _as_batch(targets, intervals)
    below = np.maximum(lower - t, 0.0)
    above = np.maximum(t - upper, 0.0)
    return float(sigma_p * (below.sum() + above.sum()))


def default_sigma_p(n: int, R: float) -> float:
    """Default miss-penalty factor, commensurate with PINAW units."""
    return 1.0 / (n * R)


@dataclass(frozen=True)
class PiMetrics:
    """Bundle of every PI quality quantity used by costs and reports."""

    picp: float
    pinaw: float
    pinafd: float
    ace: float
    s_av: float
    mid_dev: float
    pun: float
    n_misses: int

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "PiMetrics":
        return cls(**json.loads(text))


def compute_metrics(
    targets, intervals, R: float, alpha: float, sigma_p: float | None = None
) -> PiMetrics:
    """Evaluate all metrics on one batch. ``sigma_p`` defaults to 1/(n*R)."""
    t, _, _ = _as_batch(targets, intervals)
    n = t.size
    if sigma_p is None:
        sigma_p = default_sigma_p(n, R)
    p = picp(targets, intervals)
    return PiMetrics(
        picp=p,
        pinaw=pinaw(intervals, R),
        pinafd=pinafd(targets, intervals, R),
        ace=ace(p, 1.0 - alpha),
        s_av=interval_score(targets, intervals, alpha),
        mid_dev=mid_deviation(targets, intervals),
        pun=pun(targets, intervals, sigma_p),
        n_misses=int(round(n * (1.0 - p))),
    )
