"""Series ingestion, windowing, splitting, and the synthetic quantile oracle."""

import math

import numpy as np
import pytest

from lubench import dataset
from lubench.dataset import (
    MinMaxScaler,
    QuantileOracle,
    SynthSpec,
    TimeSeries,
    generate_synthetic,
    load_csv,
    make_windows,
    save_csv,
    split_chronological,
    time_of_day,
)


class TestTimeSeries:
    def test_valid(self):
        ts = TimeSeries(np.array([0.0, 1.0, 2.0]), np.array([1.0, 2.0, 3.0]))
        assert len(ts) == 3

    def test_non_monotone(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            TimeSeries(np.array([0.0, 2.0, 1.0]), np.zeros(3))

    def test_duplicate_time(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            TimeSeries(np.array([0.0, 1.0, 1.0]), np.zeros(3))

    def test_nonfinite_value(self):
        with pytest.raises(ValueError, match="finite"):
            TimeSeries(np.array([0.0, 1.0]), np.array([1.0, np.nan]))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            TimeSeries(np.array([0.0, 1.0]), np.zeros(3))


class TestTimeOfDay:
    def test_ninety_minutes(self):
        assert time_of_day([5400.0]) == pytest.approx([1.5])

    def test_wraps_at_midnight(self):
        assert time_of_day([86400.0 + 3600.0]) == pytest.approx([1.0])

    def test_range(self):
        rng = np.random.default_rng(0)
        tod = time_of_day(rng.uniform(0, 1e9, 1000))
        assert np.all((tod >= 0) & (tod < 24))


class TestMakeWindows:
    def test_horizon_one(self):
        series = TimeSeries(np.arange(6) * 300.0, np.array([10, 20, 30, 40, 50, 60.0]))
        ws = make_windows(series, lags=4, horizon=1)
        assert len(ws) == 2
        assert ws.features[0, :4].tolist() == [10, 20, 30, 40]
        assert ws.targets.tolist() == [50.0, 60.0]
        assert ws.timestamps.tolist() == [1200.0, 1500.0]
        assert ws.features[0, 4] == pytest.approx(time_of_day([1200.0])[0])

    def test_horizon_two(self):
        series = TimeSeries(np.arange(6) * 300.0, np.array([10, 20, 30, 40, 50, 60.0]))
        ws = make_windows(series, lags=4, horizon=2)
        assert len(ws) == 1
        assert ws.features[0, :4].tolist() == [10, 20, 30, 40]
        assert ws.targets.tolist() == [60.0]

    def test_too_short(self):
        series = TimeSeries(np.arange(4) * 300.0, np.arange(4, dtype=float))
        with pytest.raises(ValueError, match="too short"):
            make_windows(series, lags=4, horizon=1)

    def test_no_target_leakage(self):
        rng = np.random.default_rng(3)
        series = TimeSeries(np.arange(50) * 60.0, rng.normal(size=50))
        ws = make_windows(series, lags=4, horizon=1)
        # every target strictly postdates every lag feature of its window
        for k in range(len(ws)):
            assert np.all(ws.features[k, :4] == series.values[k : k + 4])
            assert ws.targets[k] == series.values[k + 4]


class TestSplit:
    def _windows(self, n):
        rng = np.random.default_rng(1)
        series = TimeSeries(np.arange(n + 4) * 60.0, rng.normal(size=n + 4))
        return make_windows(series)

    def test_100_windows(self):
        data = split_chronological(self._windows(100))
        assert (len(data.train), len(data.validation), len(data.test)) == (70, 15, 15)

    def test_10_windows_8_1_1(self):
        data = split_chronological(self._windows(10), (0.8, 0.1, 0.1))
        assert (len(data.train), len(data.validation), len(data.test)) == (8, 1, 1)

    def test_bad_fractions(self):
        with pytest.raises(ValueError, match="sum to 1"):
            split_chronological(self._windows(10), (0.5, 0.5, 0.5))

    def test_chronological_order(self):
        data = split_chronological(self._windows(100))
        assert data.train.timestamps[-1] < data.validation.timestamps[0]
        assert data.validation.timestamps[-1] < data.test.timestamps[0]

    def test_range_from_train_only(self):
        ws = self._windows(100)
        data = split_chronological(ws)
        t = data.train.targets
        assert data.range_r == pytest.approx(float(t.max() - t.min()))

    def test_scaler_train_unit_box(self):
        data = split_chronological(self._windows(200))
        Xn = data.features(data.train)
        assert Xn.min() >= -1e-12 and Xn.max() <= 1 + 1e-12

    def test_scaler_round_trip(self):
        data = split_chronological(self._windows(100))
        X = data.test.features
        back = data.scaler.inverse_transform(data.scaler.transform(X))
        assert np.allclose(back, X, atol=1e-12)


class TestMinMaxScaler:
    def test_constant_feature(self):
        X = np.column_stack([np.ones(5), np.arange(5.0)])
        sc = MinMaxScaler.fit(X)
        out = sc.transform(X)
        assert np.all(out[:, 0] == 0.0)
        assert out[:, 1].tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]


class TestSynthSpec:
    def test_short_period(self):
        with pytest.raises(ValueError, match="period"):
            SynthSpec(length=100, period=4)

    def test_length_le_period(self):
        with pytest.raises(ValueError, match="length"):
            SynthSpec(length=8, period=8)

    def test_bad_noise(self):
        with pytest.raises(ValueError, match="noise_kind"):
            SynthSpec(length=100, period=16, noise_kind="cauchy")


class TestSynthetic:
    def test_deterministic(self):
        spec = SynthSpec(length=500, period=48, seed=7)
        s1, _ = generate_synthetic(spec)
        s2, _ = generate_synthetic(spec)
        assert np.array_equal(s1.values, s2.values)
        assert np.array_equal(s1.timestamps, s2.timestamps)

    def test_one_period_per_day(self):
        spec = SynthSpec(length=500, period=48, seed=7)
        series, _ = generate_synthetic(spec)
        assert series.timestamps[48] - series.timestamps[0] == pytest.approx(86400.0)

    def test_oracle_width_at_peak(self):
        spec = SynthSpec(length=500, period=48, seed=7)
        series, oracle = generate_synthetic(spec)
        t_peak = series.timestamps[12]  # quarter period: s = sin(pi/2) = 1
        lo, hi = oracle.interval([t_peak], 0.10)
        assert hi[0] - lo[0] == pytest.approx(0.65796, abs=2e-5)

    def test_oracle_width_at_zero_crossing(self):
        spec = SynthSpec(length=500, period=48, seed=7)
        series, oracle = generate_synthetic(spec)
        lo, hi = oracle.interval([series.timestamps[0]], 0.10)
        assert hi[0] - lo[0] == pytest.approx(0.16449, abs=1e-5)

    def test_oracle_quantile_validation(self):
        _, oracle = generate_synthetic(SynthSpec(length=100, period=16))
        with pytest.raises(ValueError):
            oracle.quantile([0.0], 1.5)

    @pytest.mark.parametrize("noise", ["gaussian-heteroscedastic", "lognormal-skewed"])
    def test_oracle_coverage(self, noise):
        n = 20000
        spec = SynthSpec(length=n, period=288, noise_kind=noise, seed=11)
        series, oracle = generate_synthetic(spec)
        lo, hi = oracle.interval(series.timestamps, 0.10)
        cov = np.mean((series.values >= lo) & (series.values <= hi))
        assert abs(cov - 0.90) < 3.0 / math.sqrt(n)

    def test_lognormal_skew(self):
        spec = SynthSpec(length=20000, period=288, noise_kind="lognormal-skewed", seed=2)
        series, oracle = generate_synthetic(spec)
        # skewed noise: the upper tail is farther from the median than the lower
        t = series.timestamps[:1]
        q05, q50, q95 = (oracle.quantile(t, p)[0] for p in (0.05, 0.5, 0.95))
        assert q95 - q50 > q50 - q05


class TestCsv:
    def test_round_trip(self, tmp_path):
        series = TimeSeries(np.array([0.0, 300.0, 600.0]), np.array([10.0, 20.0, 30.0]))
        p = tmp_path / "s.csv"
        save_csv(series, p)
        back = load_csv(p, "t", "v")
        assert np.array_equal(back.timestamps, series.timestamps)
        assert np.array_equal(back.values, series.values)

    def test_shuffled_rows_sorted(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("t,v\n600,30\n0,10\n300,20\n")
        back = load_csv(p, "t", "v")
        assert back.values.tolist() == [10.0, 20.0, 30.0]

    def test_iso_timestamps(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("when,load\n2024-01-01T00:00:00,1.0\n2024-01-01T00:05:00,2.0\n")
        back = load_csv(p, "when", "load")
        assert back.timestamps[1] - back.timestamps[0] == pytest.approx(300.0)

    def test_duplicate_timestamp_error(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("t,v\n0,10\n300,20\n300,25\n")
        with pytest.raises(ValueError, match="duplicate"):
            load_csv(p, "t", "v")

    def test_bad_rows_rejected_and_logged(self, tmp_path, caplog):
        p = tmp_path / "s.csv"
        p.write_text("t,v\n0,10\nnot-a-time,20\n600,oops\n900,40\n1200,inf\n")
        with caplog.at_level("WARNING", logger="lubench.dataset"):
            back = load_csv(p, "t", "v")
        assert back.values.tolist() == [10.0, 40.0]
        assert "3 unparseable rows" in caplog.text

    def test_missing_column(self, tmp_path):
        p = tmp_path / "s.csv"
        p.write_text("t,v\n0,10\n")
        with pytest.raises(ValueError, match="missing column"):
            load_csv(p, "time", "v")
