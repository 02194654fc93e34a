"""Non-NN reference prediction intervals: the Gaussian interval around a
mean and the empirical-quantile interval."""

from __future__ import annotations

from statistics import NormalDist

import numpy as np

# conventional multipliers for the common coverage levels; other alphas
# fall back to the exact normal inverse CDF
GAUSSIAN_MULTIPLIERS = {0.25: 1.15, 0.10: 1.64, 0.05: 1.96}

_STD_NORMAL = NormalDist()


def gaussian_multiplier(alpha: float) -> float:
    """Half-width multiplier lambda for a central (1 - alpha) interval."""
    if alpha in GAUSSIAN_MULTIPLIERS:
        return GAUSSIAN_MULTIPLIERS[alpha]
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    return _STD_NORMAL.inv_cdf(1.0 - alpha / 2.0)


def traditional_pi(mu, sigma, alpha: float, multiplier: float | None = None):
    """Symmetric Gaussian interval [mu - lambda*sigma, mu + lambda*sigma].

    ``mu``/``sigma`` may be scalars or arrays; sigma must be nonnegative.
    """
    mu = np.asarray(mu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma < 0):
        raise ValueError("sigma must be nonnegative")
    lam = gaussian_multiplier(alpha) if multiplier is None else multiplier
    half = lam * sigma
    return mu - half, mu + half


def empirical_quantile_pi(samples, alpha: float) -> tuple[float, float]:
    """Central (1 - alpha) interval from linearly interpolated order
    statistics of the samples."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("samples must be nonempty")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    lo = float(np.quantile(x, alpha / 2.0, method="linear"))
    hi = float(np.quantile(x, 1.0 - alpha / 2.0, method="linear"))
    return lo, hi


def rolling_gaussian_pi(values, window: int, alpha: float):
    """Gaussian intervals with mean and sample std from a trailing window.

    Returns (lower, upper) arrays of length ``len(values) - window``; the
    interval at position i uses values[i : i + window] and predicts for
    values[i + window].
    """
    x = np.asarray(values, dtype=float)
    if window < 2:
        raise ValueError("window must be >= 2")
    if x.size <= window:
        raise ValueError(f"series of length {x.size} too short for window {window}")
    n_out = x.size - window
    strides = np.lib.stride_tricks.sliding_window_view(x, window)[:n_out]
    mu = strides.mean(axis=1)
    sigma = strides.std(axis=1, ddof=1)
    return traditional_pi(mu, sigma, alpha)
