"""Simulated-annealing training of interval networks.

Metropolis acceptance on the training-split cost with a geometric
temperature schedule; the proposal step size shrinks with temperature.
Validation-split PICP/PINAW are tracked every iteration for the
convergence milestones.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import backend, metrics
from .costs import CostSpec, evaluate
from .dataset import Dataset
from .metrics import PiMetrics
from .network import MlpModel, init_weights, predict_dataset

# "logical PI" plausibility bands: coverage not catastrophically low,
# width neither collapsed (below 1% of the target range; this also rejects
# degenerate all-crossed solutions whose clamped width is ~0) nor spanning
# most of the range
LOGICAL_PINAW_MIN = 0.01  # exclusive
LOGICAL_PINAW_MAX = 0.9

MILESTONE_PICP_TOL = 0.01
MILESTONE_PINAW_FACTOR = 1.5


@dataclass(frozen=True)
class AnnealConfig:
    max_iters: int = 2000
    t0: float = 1.0
    cooling: float = 0.995
    step_scale: float = 0.1
    perturb_fraction: float = 0.2
    seed: int = 0
    restarts: int = 4

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not 0.0 < self.cooling < 1.0:
            raise ValueError(f"cooling must be in (0, 1), got {self.cooling}")
        if self.step_scale <= 0:
            raise ValueError("step_scale must be positive")
        if not 0.0 < self.perturb_fraction <= 1.0:
            raise ValueError("perturb_fraction must be in (0, 1]")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass
class TrainingTrace:
    """Per-iteration training record plus derived convergence summary."""

    cost: np.ndarray
    picp: np.ndarray  # validation PICP of the current state
    pinaw: np.ndarray  # validation PINAW of the current state
    temperature: np.ndarray
    iter_picp_1pct: int | None
    iter_pinaw_15: int | None
    converged: bool
    final_metrics: PiMetrics

    def __len__(self) -> int:
        return self.cost.size

    def to_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for i in range(len(self)):
                fh.write(
                    json.dumps(
                        {
                            "iter": i + 1,
                            "cost": float(self.cost[i]),
                            "picp": float(self.picp[i]),
                            "pinaw": float(self.pinaw[i]),
                            "temperature": float(self.temperature[i]),
                        }
                    )
                    + "\n"
                )


@dataclass
class TrainedModel:
    """Best-cost model from one annealing run with its trace."""

    model: MlpModel
    trace: TrainingTrace
    spec: CostSpec
    best_cost: float


def propose_neighbor(
    weights: np.ndarray,
    config: AnnealConfig,
    rng: np.random.Generator,
    temperature: float,
) -> np.ndarray:
    """Perturb a random subset of coordinates with Gaussian noise whose
    standard deviation scales with the current temperature."""
    n = weights.size
    k = math.ceil(config.perturb_fraction * n)
    idx = rng.choice(n, size=k, replace=False)
    std = config.step_scale * temperature / config.t0
    new = weights.copy()
    new[idx] += rng.normal(0.0, std, size=k)
    return new


def metropolis_accept(delta: float, temperature: float, u: float) -> bool:
    """Standard Metropolis rule: always accept downhill moves, accept uphill
    moves with probability exp(-delta / T)."""
    return delta <= 0 or u < math.exp(-delta / temperature)


def is_logical_pi(m: PiMetrics, alpha: float) -> bool:
    """Plausibility test for a trained result: PICP within [1 - 2*alpha, 1]
    and PINAW strictly inside (0, 0.9)."""
    return (
        1.0 - 2.0 * alpha <= m.picp <= 1.0
        and LOGICAL_PINAW_MIN < m.pinaw < LOGICAL_PINAW_MAX
    )


def _milestones(
    trace_picp: np.ndarray,
    trace_pinaw: np.ndarray,
    target_picp: float,
    final_pinaw: float,
) -> tuple[int | None, int | None]:
    hit_picp = np.flatnonzero(np.abs(target_picp - trace_picp) < MILESTONE_PICP_TOL)
    iter_picp = int(hit_picp[0]) + 1 if hit_picp.size else None
    iter_pinaw = None
    if final_pinaw > 0:
        hit_pinaw = np.flatnonzero(trace_pinaw < MILESTONE_PINAW_FACTOR * final_pinaw)
        if hit_pinaw.size:
            iter_pinaw = int(hit_pinaw[0]) + 1
    return iter_picp, iter_pinaw


def anneal(
    data: Dataset,
    model0: MlpModel,
    cost_spec: CostSpec,
    config: AnnealConfig,
    rng: np.random.Generator | None = None,
) -> TrainedModel:
    """Run one simulated-annealing training pass.

    Cost is evaluated on the training split; the trace and milestones use
    validation metrics; the returned model carries the best-cost weights.
    A non-finite cost aborts the run and flags it non-converged.
    """
    if len(data.train) == 0 or len(data.validation) == 0:
        raise ValueError("train and validation splits must be nonempty")
    if model0.input_dim != data.train.features.shape[1]:
        raise ValueError("model input_dim does not match dataset features")
    if rng is None:
        rng = np.random.default_rng(config.seed)

    X_train = data.features(data.train)
    X_val = data.features(data.validation)
    t_train = data.train.targets
    t_val = data.validation.targets
    R = data.range_r

    def train_cost(weights: np.ndarray) -> float:
        intervals = predict_dataset(model0.with_weights(weights), X_train)
        return evaluate(cost_spec, t_train, intervals, R)

    t_val_c = np.ascontiguousarray(t_val, dtype=float)

    def val_picp_pinaw(weights: np.ndarray) -> tuple[float, float]:
        lower, upper = predict_dataset(model0.with_weights(weights), X_val)
        cov, clamped, *_ = backend.pi_stats(t_val_c, lower, upper)
        return cov / t_val_c.size, clamped / (t_val_c.size * R)

    current = model0.weights.copy()
    cur_cost = train_cost(current)
    cur_val = val_picp_pinaw(current)
    best = current.copy()
    best_cost = cur_cost

    n_it = config.max_iters
    tr_cost = np.empty(n_it)
    tr_picp = np.empty(n_it)
    tr_pinaw = np.empty(n_it)
    tr_temp = np.empty(n_it)

    aborted = False
    temperature = config.t0
    steps = 0
    for i in range(n_it):
        candidate = propose_neighbor(current, config, rng, temperature)
        cand_cost = train_cost(candidate)
        # acceptance draw happens unconditionally to keep the RNG stream
        # aligned across paired cost functions
        u = rng.uniform()
        if not math.isfinite(cand_cost):
            aborted = True
            steps = i
            break
        if metropolis_accept(cand_cost - cur_cost, temperature, u):
            current = candidate
            cur_cost = cand_cost
            cur_val = val_picp_pinaw(current)
            if cur_cost < best_cost:
                best_cost = cur_cost
                best = current.copy()
        tr_cost[i] = cur_cost
        tr_picp[i], tr_pinaw[i] = cur_val
        tr_temp[i] = temperature
        temperature *= config.cooling
        steps = i + 1

    best_model = model0.with_weights(best)
    final_intervals = predict_dataset(best_model, X_val)
    final = metrics.compute_metrics(t_val, final_intervals, R, cost_spec.alpha)
    target_picp = cost_spec.pinc + cost_spec.coverage_margin
    iter_picp, iter_pinaw = _milestones(
        tr_picp[:steps], tr_pinaw[:steps], target_picp, final.pinaw
    )
    trace = TrainingTrace(
        cost=tr_cost[:steps],
        picp=tr_picp[:steps],
        pinaw=tr_pinaw[:steps],
        temperature=tr_temp[:steps],
        iter_picp_1pct=iter_picp,
        iter_pinaw_15=iter_pinaw,
        converged=(not aborted) and is_logical_pi(final, cost_spec.alpha),
        final_metrics=final,
    )
    return TrainedModel(model=best_model, trace=trace, spec=cost_spec, best_cost=best_cost)


def multi_restart(
    data: Dataset,
    cost_spec: CostSpec,
    config: AnnealConfig,
    hidden: int = 10,
    activation: str = "tanh",
    seed_seq: np.random.SeedSequence | None = None,
) -> TrainedModel:
    """Train ``config.restarts`` independently initialized networks and keep
    the lowest-cost one, preferring results that pass the logical-PI test.

    Restart seeds derive from ``seed_seq`` (default: a sequence built from
    ``config.seed``), so initial weights depend only on the seed ladder and
    not on the cost function — paired comparisons start from identical
    initializations.
    """
    base = seed_seq if seed_seq is not None else np.random.SeedSequence(config.seed)
    input_dim = None
    results = []
    for child in base.spawn(config.restarts):
        rng = np.random.default_rng(child)
        if input_dim is None:
            input_dim = int(np.atleast_2d(data.train.features).shape[1])
        model0 = init_weights(input_dim, hidden, activation, seed=rng)
        results.append(anneal(data, model0, cost_spec, config, rng=rng))
    logical = [r for r in results if r.trace.converged]
    pool = logical if logical else results
    return min(pool, key=lambda r: r.best_cost)
