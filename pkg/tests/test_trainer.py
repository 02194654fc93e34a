"""Simulated-annealing trainer: acceptance rule, proposals, schedule,
reproducibility, milestones, and restart selection."""

import json
import math
from types import SimpleNamespace

import numpy as np
import pytest

from lubench import trainer
from lubench.costs import CostSpec
from lubench.dataset import SynthSpec, generate_synthetic, make_windows, split_chronological
from lubench.metrics import PiMetrics
from lubench.network import init_weights
from lubench.trainer import (
    AnnealConfig,
    anneal,
    is_logical_pi,
    metropolis_accept,
    multi_restart,
    propose_neighbor,
)


@pytest.fixture(scope="module")
def small_data():
    series, _ = generate_synthetic(SynthSpec(length=300, period=48, seed=3))
    return split_chronological(make_windows(series))


QUICK = AnnealConfig(max_iters=40, seed=0, restarts=1)
SPEC = CostSpec(kind="cwfdc", alpha=0.10)


def _model(data, seed=0, hidden=3):
    return init_weights(data.train.features.shape[1], hidden, seed=seed)


class TestAnnealConfig:
    def test_defaults(self):
        c = AnnealConfig()
        assert (c.max_iters, c.t0, c.cooling, c.step_scale) == (2000, 1.0, 0.995, 0.1)
        assert (c.perturb_fraction, c.restarts) == (0.2, 4)

    @pytest.mark.parametrize(
        "kw",
        [
            {"max_iters": 0},
            {"cooling": 0.0},
            {"cooling": 1.0},
            {"step_scale": 0.0},
            {"perturb_fraction": 0.0},
            {"perturb_fraction": 1.5},
            {"restarts": 0},
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            AnnealConfig(**kw)


class TestMetropolisAccept:
    def test_downhill_always(self):
        for temp in (1e-9, 0.5, 100.0):
            for u in (0.0, 0.5, 0.999999):
                assert metropolis_accept(-0.5, temp, u)

    def test_uphill_threshold(self):
        # delta=+1, T=0.5: accept iff u < e^-2 = 0.135335...
        assert metropolis_accept(1.0, 0.5, 0.13)
        assert not metropolis_accept(1.0, 0.5, 0.14)
        assert metropolis_accept(1.0, 0.5, math.exp(-2.0) - 1e-12)
        assert not metropolis_accept(1.0, 0.5, math.exp(-2.0))

    def test_zero_delta_accepted(self):
        assert metropolis_accept(0.0, 0.5, 0.999)


class TestProposeNeighbor:
    def test_exact_coordinate_count(self):
        cfg = AnnealConfig(perturb_fraction=0.2)
        w = np.zeros(10)
        new = propose_neighbor(w, cfg, np.random.default_rng(0), cfg.t0)
        assert np.count_nonzero(new - w) == 2  # ceil(0.2 * 10)

    def test_ceiling_keeps_at_least_one(self):
        cfg = AnnealConfig(perturb_fraction=0.01)
        w = np.zeros(10)
        new = propose_neighbor(w, cfg, np.random.default_rng(1), cfg.t0)
        assert np.count_nonzero(new - w) == 1

    def test_deterministic_under_seed(self):
        cfg = AnnealConfig()
        w = np.arange(20, dtype=float)
        a = propose_neighbor(w, cfg, np.random.default_rng(5), 0.7)
        b = propose_neighbor(w, cfg, np.random.default_rng(5), 0.7)
        assert np.array_equal(a, b)

    def test_input_untouched(self):
        cfg = AnnealConfig()
        w = np.zeros(10)
        propose_neighbor(w, cfg, np.random.default_rng(0), cfg.t0)
        assert np.all(w == 0)

    def test_step_shrinks_with_temperature(self):
        cfg = AnnealConfig(perturb_fraction=1.0, step_scale=0.1, t0=1.0)
        w = np.zeros(2000)
        hot = propose_neighbor(w, cfg, np.random.default_rng(2), 1.0)
        cold = propose_neighbor(w, cfg, np.random.default_rng(2), 0.01)
        assert np.allclose(cold, 0.01 * hot, atol=1e-15)
        assert np.std(hot) == pytest.approx(0.1, rel=0.1)


class TestIsLogicalPi:
    def _m(self, picp, pinaw):
        return PiMetrics(picp, pinaw, 0.0, 0.0, 0.0, 0.0, 0.0, 0)

    def test_good(self):
        assert is_logical_pi(self._m(0.95, 0.07), 0.05)

    def test_collapsed_width(self):
        assert not is_logical_pi(self._m(0.95, 0.0), 0.05)
        assert not is_logical_pi(self._m(0.95, trainer.LOGICAL_PINAW_MIN), 0.05)

    def test_low_coverage(self):
        assert not is_logical_pi(self._m(0.5, 0.1), 0.05)

    def test_spanning_width(self):
        assert not is_logical_pi(self._m(0.95, 0.95), 0.05)


class TestAnneal:
    def test_trace_length_and_schedule(self, small_data):
        cfg = AnnealConfig(max_iters=5, t0=2.0, cooling=0.9, restarts=1)
        out = anneal(small_data, _model(small_data), SPEC, cfg)
        assert len(out.trace) == 5
        want = 2.0 * 0.9 ** np.arange(5)
        assert np.allclose(out.trace.temperature, want, rtol=1e-12, atol=0)

    def test_single_iteration(self, small_data):
        cfg = AnnealConfig(max_iters=1, restarts=1)
        out = anneal(small_data, _model(small_data), SPEC, cfg)
        assert len(out.trace) == 1

    def test_reproducible(self, small_data):
        a = anneal(small_data, _model(small_data), SPEC, QUICK)
        b = anneal(small_data, _model(small_data), SPEC, QUICK)
        assert np.array_equal(a.model.weights, b.model.weights)
        assert np.array_equal(a.trace.cost, b.trace.cost)
        assert a.best_cost == b.best_cost

    def test_best_cost_not_above_trace(self, small_data):
        out = anneal(small_data, _model(small_data), SPEC, QUICK)
        assert out.best_cost <= out.trace.cost.min() + 1e-15

    def test_dimension_mismatch(self, small_data):
        bad = init_weights(3, 2, seed=0)
        with pytest.raises(ValueError, match="input_dim"):
            anneal(small_data, bad, SPEC, QUICK)

    def test_nonfinite_cost_aborts(self, small_data, monkeypatch):
        calls = {"n": 0}
        real = trainer.evaluate

        def poisoned(spec, targets, intervals, R):
            calls["n"] += 1
            if calls["n"] > 10:
                return float("nan")
            return real(spec, targets, intervals, R)

        monkeypatch.setattr(trainer, "evaluate", poisoned)
        out = anneal(small_data, _model(small_data), SPEC, QUICK)
        assert not out.trace.converged
        assert len(out.trace) < QUICK.max_iters

    def test_milestones_match_rescan(self, small_data):
        cfg = AnnealConfig(max_iters=200, t0=0.01, cooling=0.999, restarts=1, seed=4)
        out = anneal(small_data, _model(small_data, seed=1, hidden=5), SPEC, cfg)
        tr = out.trace
        target = SPEC.pinc + SPEC.coverage_margin
        hits = np.flatnonzero(np.abs(target - tr.picp) < trainer.MILESTONE_PICP_TOL)
        want = int(hits[0]) + 1 if hits.size else None
        assert tr.iter_picp_1pct == want
        final = tr.final_metrics.pinaw
        if final > 0:
            hits_w = np.flatnonzero(tr.pinaw < trainer.MILESTONE_PINAW_FACTOR * final)
            want_w = int(hits_w[0]) + 1 if hits_w.size else None
            assert tr.iter_pinaw_15 == want_w

    def test_trace_jsonl_round_trip(self, small_data, tmp_path):
        out = anneal(small_data, _model(small_data), SPEC, QUICK)
        p = tmp_path / "trace.jsonl"
        out.trace.to_jsonl(p)
        rows = [json.loads(line) for line in p.read_text().splitlines()]
        assert len(rows) == len(out.trace)
        assert rows[0]["iter"] == 1
        assert rows[3]["cost"] == out.trace.cost[3]
        assert rows[-1]["temperature"] == out.trace.temperature[-1]


class TestMultiRestart:
    def test_deterministic(self, small_data):
        cfg = AnnealConfig(max_iters=20, seed=9, restarts=2)
        a = multi_restart(small_data, SPEC, cfg, hidden=3)
        b = multi_restart(small_data, SPEC, cfg, hidden=3)
        assert np.array_equal(a.model.weights, b.model.weights)
        assert a.best_cost == b.best_cost

    def test_single_restart_equals_anneal(self, small_data):
        cfg = AnnealConfig(max_iters=20, seed=9, restarts=1)
        combined = multi_restart(small_data, SPEC, cfg, hidden=3)
        rng = np.random.default_rng(np.random.SeedSequence(9).spawn(1)[0])
        model0 = init_weights(small_data.train.features.shape[1], 3, seed=rng)
        single = anneal(small_data, model0, SPEC, cfg, rng=rng)
        assert np.array_equal(combined.model.weights, single.model.weights)
        assert combined.best_cost == single.best_cost

    def test_prefers_logical_results(self, small_data, monkeypatch):
        # restart results: non-logical at the lowest cost, then two logical
        plan = [(False, 0.1), (True, 0.5), (True, 0.7)]
        it = iter(plan)

        def fake_anneal(data, model0, cost_spec, config, rng=None):
            converged, cost = next(it)
            trace = SimpleNamespace(converged=converged)
            return SimpleNamespace(
                model=model0, trace=trace, spec=cost_spec, best_cost=cost
            )

        monkeypatch.setattr(trainer, "anneal", fake_anneal)
        cfg = AnnealConfig(max_iters=5, seed=0, restarts=3)
        out = multi_restart(small_data, SPEC, cfg, hidden=3)
        assert out.trace.converged and out.best_cost == 0.5

    def test_falls_back_when_none_logical(self, small_data, monkeypatch):
        plan = [(False, 0.4), (False, 0.2)]
        it = iter(plan)

        def fake_anneal(data, model0, cost_spec, config, rng=None):
            converged, cost = next(it)
            return SimpleNamespace(
                model=model0,
                trace=SimpleNamespace(converged=converged),
                spec=cost_spec,
                best_cost=cost,
            )

        monkeypatch.setattr(trainer, "anneal", fake_anneal)
        cfg = AnnealConfig(max_iters=5, seed=0, restarts=2)
        out = multi_restart(small_data, SPEC, cfg, hidden=3)
        assert not out.trace.converged and out.best_cost == 0.2
