"""Time-series ingestion, lag-window construction, splitting, and synthetic
series with analytically known conditional quantiles."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from statistics import NormalDist

import numpy as np

log = logging.getLogger(__name__)

SECONDS_PER_DAY = 86400.0

NOISE_KINDS = ("gaussian-heteroscedastic", "lognormal-skewed")

# heteroscedastic noise scale around the seasonal signal s:
# sigma(s) = SIGMA_BASE + SIGMA_SLOPE * |s|
SIGMA_BASE = 0.05
SIGMA_SLOPE = 0.15

# exp(0.5 z) for standard normal z has mean e^{0.125}
_LOGNORMAL_MEAN = math.exp(0.125)

_STD_NORMAL = NormalDist()


@dataclass(frozen=True)
class TimeSeries:
    """A univariate series: strictly increasing timestamps (seconds since
    epoch) and finite real values."""

    timestamps: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "values", vals)
        if ts.shape != vals.shape or ts.ndim != 1:
            raise ValueError("timestamps and values must be 1-d and equal length")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        if ts.size > 1 and not np.all(np.diff(ts) > 0):
            raise ValueError("timestamps must be strictly increasing")

    def __len__(self) -> int:
        return self.timestamps.size


def time_of_day(timestamps) -> np.ndarray:
    """Hours since midnight in [0, 24): hour + minutes/60 (+ seconds)."""
    ts = np.asarray(timestamps, dtype=float)
    return (ts % SECONDS_PER_DAY) / 3600.0


@dataclass(frozen=True)
class WindowSet:
    """Supervised samples: a feature matrix of lagged values plus
    time-of-day, targets, and the timestamps of the targets."""

    features: np.ndarray  # (n, lags + 1)
    targets: np.ndarray  # (n,)
    timestamps: np.ndarray  # (n,) timestamps of the targets

    def __post_init__(self):
        if self.features.shape[0] != self.targets.size:
            raise ValueError("features and targets length mismatch")

    def __len__(self) -> int:
        return self.targets.size

    def slice(self, start: int, stop: int) -> "WindowSet":
        return WindowSet(
            self.features[start:stop],
            self.targets[start:stop],
            self.timestamps[start:stop],
        )


@dataclass(frozen=True)
class MinMaxScaler:
    """Per-feature min-max normalization fitted on the training split."""

    lo: np.ndarray
    span: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "MinMaxScaler":
        lo = X.min(axis=0)
        span = X.max(axis=0) - lo
        # constant features map to 0 instead of dividing by zero
        span = np.where(span > 0, span, 1.0)
        return cls(lo=lo, span=span)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.lo) / self.span

    def inverse_transform(self, X: np.ndarray) -> np.ndarray:
        return X * self.span + self.lo


@dataclass(frozen=True)
class Dataset:
    """Chronological train/validation/test windows with normalization and
    target range fitted on the training split only."""

    train: WindowSet
    validation: WindowSet
    test: WindowSet
    range_r: float
    scaler: MinMaxScaler

    def features(self, split: WindowSet) -> np.ndarray:
        """Normalized feature matrix for a split."""
        return self.scaler.transform(split.features)


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a synthetic series with known conditional quantiles."""

    length: int
    period: int
    noise_kind: str = "gaussian-heteroscedastic"
    seed: int = 0

    def __post_init__(self):
        if self.period < 8:
            raise ValueError(f"period must be >= 8, got {self.period}")
        if self.length <= self.period:
            raise ValueError("length must exceed period")
        if self.noise_kind not in NOISE_KINDS:
            raise ValueError(
                f"unknown noise_kind {self.noise_kind!r}; expected one of {NOISE_KINDS}"
            )


@dataclass(frozen=True)
class QuantileOracle:
    """Exact conditional quantiles of the synthetic generator.

    The generator emits v_t = s_t + sigma(s_t) * noise with
    s_t = sin(2*pi*t/period); the oracle inverts the noise distribution.
    """

    noise_kind: str
    period: int
    dt: float  # seconds between samples

    def _signal_sigma(self, timestamps) -> tuple[np.ndarray, np.ndarray]:
        idx = np.asarray(timestamps, dtype=float) / self.dt
        s = np.sin(2.0 * np.pi * idx / self.period)
        return s, SIGMA_BASE + SIGMA_SLOPE * np.abs(s)

    def quantile(self, timestamps, p: float) -> np.ndarray:
        """Conditional p-quantile of the value at each timestamp."""
        if not 0.0 < p < 1.0:
            raise ValueError(f"quantile level must be in (0, 1), got {p}")
        s, sigma = self._signal_sigma(timestamps)
        z = _STD_NORMAL.inv_cdf(p)
        if self.noise_kind == "gaussian-heteroscedastic":
            return s + sigma * z
        return s + sigma * (math.exp(0.5 * z) - _LOGNORMAL_MEAN)

    def interval(self, timestamps, alpha: float) -> tuple[np.ndarray, np.ndarray]:
        """Central (1 - alpha) interval at each timestamp."""
        return (
            self.quantile(timestamps, alpha / 2.0),
            self.quantile(timestamps, 1.0 - alpha / 2.0),
        )


def generate_synthetic(spec: SynthSpec) -> tuple[TimeSeries, QuantileOracle]:
    """Seasonal sine signal plus heteroscedastic noise, deterministic under
    the spec seed. One period spans one day so time-of-day is informative."""
    dt = SECONDS_PER_DAY / spec.period
    idx = np.arange(spec.length, dtype=float)
    s = np.sin(2.0 * np.pi * idx / spec.period)
    sigma = SIGMA_BASE + SIGMA_SLOPE * np.abs(s)
    rng = np.random.default_rng(spec.seed)
    z = rng.standard_normal(spec.length)
    if spec.noise_kind == "gaussian-heteroscedastic":
        values = s + sigma * z
    else:
        values = s + sigma * (np.exp(0.5 * z) - _LOGNORMAL_MEAN)
    series = TimeSeries(timestamps=idx * dt, values=values)
    oracle = QuantileOracle(noise_kind=spec.noise_kind, period=spec.period, dt=dt)
    return series, oracle


def _parse_timestamp(raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        pass
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def load_csv(path, time_col: str, value_col: str) -> TimeSeries:
    """Read a series from a UTF-8 CSV with a header row.

    Timestamps may be numeric (seconds since epoch) or ISO-8601. Rows with
    unparseable fields are dropped and their row numbers logged; duplicate
    timestamps are an error.
    """
    times: list[float] = []
    values: list[float] = []
    rejected: list[int] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or time_col not in reader.fieldnames:
            raise ValueError(f"missing column {time_col!r} in {path}")
        if value_col not in reader.fieldnames:
            raise ValueError(f"missing column {value_col!r} in {path}")
        for rownum, row in enumerate(reader, start=2):  # 1-based incl. header
            try:
                t = _parse_timestamp(row[time_col])
                v = float(row[value_col])
            except (TypeError, ValueError):
                rejected.append(rownum)
                continue
            if not math.isfinite(v):
                rejected.append(rownum)
                continue
            times.append(t)
            values.append(v)
    if rejected:
        log.warning("%s: rejected %d unparseable rows: %s", path, len(rejected), rejected)
    ts = np.asarray(times)
    vals = np.asarray(values)
    order = np.argsort(ts, kind="stable")
    ts, vals = ts[order], vals[order]
    dup = np.flatnonzero(np.diff(ts) == 0)
    if dup.size:
        dup_times = sorted(set(ts[dup].tolist()))
        raise ValueError(f"duplicate timestamps in {path}: {dup_times}")
    return TimeSeries(timestamps=ts, values=vals)


def save_csv(series: TimeSeries, path, time_col: str = "t", value_col: str = "v") -> None:
    """Write a series in the same schema ``load_csv`` reads."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([time_col, value_col])
        for t, v in zip(series.timestamps, series.values):
            writer.writerow([repr(float(t)), repr(float(v))])


def make_windows(series: TimeSeries, lags: int = 4, horizon: int = 1) -> WindowSet:
    """Build supervised windows: ``lags`` consecutive values plus the
    time-of-day of the target, predicting the value ``horizon`` steps after
    the last lag."""
    n = len(series)
    if lags < 1 or horizon < 1:
        raise ValueError("lags and horizon must be positive")
    count = n - lags - horizon + 1
    if count < 1:
        raise ValueError(
            f"series of length {n} too short for lags={lags}, horizon={horizon}"
        )
    target_idx = np.arange(count) + lags + horizon - 1
    lag_cols = [series.values[k : k + count] for k in range(lags)]
    target_ts = series.timestamps[target_idx]
    features = np.column_stack(lag_cols + [time_of_day(target_ts)])
    return WindowSet(
        features=features,
        targets=series.values[target_idx],
        timestamps=target_ts,
    )


def split_chronological(
    windows: WindowSet, fractions: tuple[float, float, float] = (0.70, 0.15, 0.15)
) -> Dataset:
    """Contiguous chronological train/validation/test split; the target range
    R and the feature scaler are fitted on the training split only."""
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must sum to 1, got {fractions}")
    n = len(windows)
    n_train = int(n * fractions[0])
    n_val = int(n * fractions[1])
    n_test = n - n_train - n_val
    if min(n_train, n_val, n_test) < 1:
        raise ValueError(
            f"empty split for {n} windows with fractions {fractions}"
        )
    train = windows.slice(0, n_train)
    val = windows.slice(n_train, n_train + n_val)
    test = windows.slice(n_train + n_val, n)
    range_r = float(train.targets.max() - train.targets.min())
    if range_r <= 0:
        raise ValueError("training targets are constant; range R must be positive")
    return Dataset(
        train=train,
        validation=val,
        test=test,
        range_r=range_r,
        scaler=MinMaxScaler.fit(train.features),
    )
