"""Benchmark harness: NN-size sweeps, multi-trial statistics, cost-function
comparisons, and plot-data emission.

Reporting conventions: PICP, PINAW, and PINAFD appear in percent in tables
(stored as fractions in per-trial records); aggregate CWC/CWFDC values are
computed from the aggregate means, with the width/failure-distance terms in
percent and the coverage term in fractions.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, replace
from statistics import median

import numpy as np

from .costs import CostSpec, selection_cost
from .dataset import Dataset
from .metrics import compute_metrics
from .network import predict_dataset
from .trainer import AnnealConfig, TrainedModel, multi_restart


def trial_seed_sequence(master_seed: int, trial: int) -> np.random.SeedSequence:
    """Seed ladder entry for one trial; independent of the cost function so
    trial k is paired across cost functions."""
    return np.random.SeedSequence(entropy=[int(master_seed), int(trial)])


@dataclass(frozen=True)
class TrialRecord:
    """Test-split outcome of one multi-restart training (fractions)."""

    trial: int
    converged: bool
    picp: float
    pinaw: float
    pinafd: float
    iter_picp_1pct: int | None
    iter_pinaw_15: int | None
    best_cost: float
    selection_value: float


@dataclass
class TrialStats:
    """Aggregate statistics over the converged trials of one cost function."""

    cost_kind: str
    alpha: float
    n_trials: int
    mu_pinaw: float  # percent
    mu_picp: float  # percent
    sigma_picp: float  # percent
    mu_pinafd: float  # percent
    mu_cwc: float
    mu_cwfdc: float
    median_iter_picp_1pct: float | None
    median_iter_pinaw_15: float | None
    convergence_rate: float
    reliable: bool
    records: list[TrialRecord] = field(default_factory=list)

    @classmethod
    def from_records(
        cls, records: list[TrialRecord], spec: CostSpec
    ) -> "TrialStats":
        n = len(records)
        conv = [r for r in records if r.converged]
        if conv:
            picps = np.array([r.picp for r in conv])
            mu_picp = float(picps.mean())
            sigma_picp = float(picps.std(ddof=1)) if len(conv) > 1 else 0.0
            mu_pinaw = float(np.mean([r.pinaw for r in conv]))
            mu_pinafd = float(np.mean([r.pinafd for r in conv]))
        else:
            mu_picp = sigma_picp = mu_pinaw = mu_pinafd = float("nan")
        gamma = 1.0 if mu_picp < spec.pinc else 0.0
        mu_cwc = 100.0 * mu_pinaw + gamma * math.exp(spec.eta * (spec.pinc - mu_picp))
        gap = spec.pinc + spec.coverage_margin - mu_picp
        mu_cwfdc = 100.0 * (mu_pinaw + mu_pinafd) + 1000.0 * gap * gap
        picp_hits = [r.iter_picp_1pct for r in records if r.iter_picp_1pct is not None]
        pinaw_hits = [r.iter_pinaw_15 for r in records if r.iter_pinaw_15 is not None]
        return cls(
            cost_kind=spec.kind,
            alpha=spec.alpha,
            n_trials=n,
            mu_pinaw=100.0 * mu_pinaw,
            mu_picp=100.0 * mu_picp,
            sigma_picp=100.0 * sigma_picp,
            mu_pinafd=100.0 * mu_pinafd,
            mu_cwc=mu_cwc,
            mu_cwfdc=mu_cwfdc,
            median_iter_picp_1pct=float(median(picp_hits)) if picp_hits else None,
            median_iter_pinaw_15=float(median(pinaw_hits)) if pinaw_hits else None,
            convergence_rate=len(conv) / n if n else 0.0,
            reliable=len(conv) >= 2,
            records=list(records),
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self))


@dataclass
class SweepResult:
    """Outcome of a hidden-size sweep; ties break toward the smaller size."""

    sizes: list[int]
    selection_values: list[float]
    chosen_size: int


def _record_trial(
    trial: int, result: TrainedModel, data: Dataset
) -> TrialRecord:
    spec = result.spec
    test_intervals = predict_dataset(result.model, data.features(data.test))
    m = compute_metrics(data.test.targets, test_intervals, data.range_r, spec.alpha)
    val_intervals = predict_dataset(result.model, data.features(data.validation))
    sel = selection_cost(spec, data.validation.targets, val_intervals, data.range_r)
    return TrialRecord(
        trial=trial,
        converged=result.trace.converged,
        picp=m.picp,
        pinaw=m.pinaw,
        pinafd=m.pinafd,
        iter_picp_1pct=result.trace.iter_picp_1pct,
        iter_pinaw_15=result.trace.iter_pinaw_15,
        best_cost=result.best_cost,
        selection_value=sel,
    )


def run_trials(
    data: Dataset,
    cost_spec: CostSpec,
    config: AnnealConfig,
    n_trials: int,
    hidden: int = 10,
    activation: str = "tanh",
    master_seed: int | None = None,
) -> TrialStats:
    """Train ``n_trials`` independent multi-restart models with a
    deterministic seed ladder and aggregate their test-split metrics."""
    if n_trials < 2:
        raise ValueError("n_trials must be >= 2")
    master = config.seed if master_seed is None else master_seed
    records = []
    for k in range(n_trials):
        result = multi_restart(
            data,
            cost_spec,
            config,
            hidden=hidden,
            activation=activation,
            seed_seq=trial_seed_sequence(master, k),
        )
        records.append(_record_trial(k, result, data))
    return TrialStats.from_records(records, cost_spec)


def compare_costs(
    data: Dataset,
    specs: list[CostSpec],
    config: AnnealConfig,
    n_trials: int,
    hidden: int = 10,
    activation: str = "tanh",
    master_seed: int | None = None,
) -> list[TrialStats]:
    """``run_trials`` per cost function on the same seed ladder, so trial k
    of every spec starts from identical initial weights."""
    if not specs:
        raise ValueError("specs must be nonempty")
    return [
        run_trials(
            data,
            spec,
            config,
            n_trials,
            hidden=hidden,
            activation=activation,
            master_seed=master_seed,
        )
        for spec in specs
    ]


def size_sweep(
    data: Dataset,
    cost_spec: CostSpec,
    config: AnnealConfig,
    sizes=range(5, 16),
    activation: str = "tanh",
) -> SweepResult:
    """Train one multi-restart model per hidden size and pick the size with
    the lowest cost-specific selection value on the validation split."""
    sizes = list(sizes)
    if not sizes:
        raise ValueError("sizes must be nonempty")
    values = []
    for size in sizes:
        result = multi_restart(data, cost_spec, config, hidden=size, activation=activation)
        if not result.trace.converged:
            values.append(float("inf"))
            continue
        intervals = predict_dataset(result.model, data.features(data.validation))
        values.append(
            selection_cost(cost_spec, data.validation.targets, intervals, data.range_r)
        )
    if not any(math.isfinite(v) for v in values):
        raise RuntimeError("no logical PI found at any size")
    # np.argmin returns the first minimum; sizes ascending gives the
    # smaller-network tie-break
    chosen = sizes[int(np.argmin(values))]
    return SweepResult(sizes=sizes, selection_values=values, chosen_size=chosen)


def emit_plot_data(
    data: Dataset,
    cost_spec: CostSpec,
    config: AnnealConfig,
    alphas: list[float],
    out_path,
    hidden: int = 10,
    activation: str = "tanh",
) -> None:
    """Train one model per alpha and write test-split intervals as CSV with
    columns (timestamp, target, lower_P, upper_P per coverage level P)."""
    if not alphas:
        raise ValueError("alphas must be nonempty")
    columns = {}
    for alpha in alphas:
        spec = replace(cost_spec, alpha=alpha, delta=None)
        result = multi_restart(data, spec, config, hidden=hidden, activation=activation)
        lower, upper = predict_dataset(result.model, data.features(data.test))
        label = f"{100.0 * (1.0 - alpha):g}"
        columns[f"lower_{label}"] = lower
        columns[f"upper_{label}"] = upper
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["timestamp", "target", *columns])
        rows = zip(data.test.timestamps, data.test.targets, *columns.values())
        for row in rows:
            writer.writerow([repr(float(x)) for x in row])


def format_table(stats_list: list[TrialStats]) -> str:
    """Fixed-width text table, one row per cost function."""
    header = (
        f"{'cost':>10} {'1-a':>5} {'N':>4} {'uPINAW':>8} {'uPICP':>8} "
        f"{'sPICP':>7} {'uPINAFD':>8} {'uCWC':>9} {'uCWFDC':>9} "
        f"{'N_picp1%':>9} {'N_pinaw1.5':>11} {'conv':>6}"
    )
    lines = [header]
    for s in stats_list:
        m1 = "-" if s.median_iter_picp_1pct is None else f"{s.median_iter_picp_1pct:.0f}"
        m2 = "-" if s.median_iter_pinaw_15 is None else f"{s.median_iter_pinaw_15:.0f}"
        lines.append(
            f"{s.cost_kind:>10} {1 - s.alpha:>5.2f} {s.n_trials:>4d} "
            f"{s.mu_pinaw:>8.2f} {s.mu_picp:>8.2f} {s.sigma_picp:>7.2f} "
            f"{s.mu_pinafd:>8.2f} {s.mu_cwc:>9.2f} {s.mu_cwfdc:>9.2f} "
            f"{m1:>9} {m2:>11} {s.convergence_rate:>6.2f}"
        )
    return "\n".join(lines)
