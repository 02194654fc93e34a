"""Pure-numpy implementation of the hot evaluation kernel.

Fallback used when the compiled extension is unavailable; the compiled
module in ``_fastcore.pyx`` implements the same signature.
"""

import numpy as np

ACT_TANH = 0
ACT_LOGISTIC = 1


def forward_batch(weights, X, hidden, activation):
    """Evaluate the interval network on a batch of feature rows.

    ``weights`` layout (flat, C-order): W1 (hidden x d), b1 (hidden),
    W2 (2 x hidden), b2 (2). Returns (lower, upper) float64 arrays.
    """
    n, d = X.shape
    h = hidden
    w1 = weights[: h * d].reshape(h, d)
    b1 = weights[h * d : h * d + h]
    w2 = weights[h * d + h : h * d + h + 2 * h].reshape(2, h)
    b2 = weights[h * d + h + 2 * h :]

    pre = X @ w1.T + b1
    if activation == ACT_TANH:
        act = np.tanh(pre)
    elif activation == ACT_LOGISTIC:
        act = 1.0 / (1.0 + np.exp(-pre))
    else:
        raise ValueError(f"unknown activation code {activation}")
    out = act @ w2.T + b2
    return np.ascontiguousarray(out[:, 0]), np.ascontiguousarray(out[:, 1])


def pi_stats(targets, lower, upper):
    """One-pass batch summary feeding every PI metric and cost.

    Returns (cov_count, clamped_width_sum, raw_width_sum, fail_dist_sum,
    miss_count, mid_sq_sum, below_sum, above_sum) where coverage tests the
    target against [min, max] of the bounds, clamped width is
    max(upper - lower, 0), the failure distance is the distance of each
    uncovered target to its nearest bound, and below/above are the raw
    bound violations max(lower - t, 0) / max(t - upper, 0).
    """
    t = np.asarray(targets, dtype=float)
    lo = np.minimum(lower, upper)
    hi = np.maximum(lower, upper)
    covered = (t >= lo) & (t <= hi)
    raw = upper - lower
    fail = np.minimum(np.abs(t - upper), np.abs(lower - t))
    mid_dev = t - 0.5 * (upper + lower)
    return (
        int(covered.sum()),
        float(np.maximum(raw, 0.0).sum()),
        float(raw.sum()),
        float(fail[~covered].sum()),
        int(t.size - covered.sum()),
        float((mid_dev * mid_dev).sum()),
        float(np.maximum(lower - t, 0.0).sum()),
        float(np.maximum(t - upper, 0.0).sum()),
    )
