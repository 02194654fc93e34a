"""Command-line interface.

One JSON config file describes the dataset, cost function(s), annealer, and
trial counts; a few flags override config keys. Subcommands:

  synth     generate a synthetic series and write it as CSV
  train     train a single model, write model JSON and trace JSONL
  sweep     hidden-size sweep, write the result as JSON
  bench     multi-trial statistics (one or several cost functions)
  plotdata  train one model per alpha and emit test-split intervals as CSV
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from . import bench as bench_mod
from .costs import CostSpec
from .dataset import (
    Dataset,
    SynthSpec,
    generate_synthetic,
    load_csv,
    make_windows,
    save_csv,
    split_chronological,
)
from .trainer import AnnealConfig, multi_restart

DEFAULT_SIZES = list(range(5, 16))


def load_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def build_series(ds_cfg: dict):
    """Series (and oracle, if synthetic) from the dataset config section."""
    kind = ds_cfg.get("kind", "synthetic")
    if kind == "synthetic":
        spec = SynthSpec(
            length=ds_cfg.get("length", 5000),
            period=ds_cfg.get("period", 288),
            noise_kind=ds_cfg.get("noise_kind", "gaussian-heteroscedastic"),
            seed=ds_cfg.get("seed", 0),
        )
        return generate_synthetic(spec)
    if kind == "csv":
        series = load_csv(
            ds_cfg["path"], ds_cfg.get("time_col", "t"), ds_cfg.get("value_col", "v")
        )
        return series, None
    raise ValueError(f"unknown dataset kind {kind!r}")


def build_dataset(ds_cfg: dict) -> Dataset:
    series, _ = build_series(ds_cfg)
    windows = make_windows(
        series, lags=ds_cfg.get("lags", 4), horizon=ds_cfg.get("horizon", 1)
    )
    fractions = tuple(ds_cfg.get("fractions", (0.70, 0.15, 0.15)))
    return split_chronological(windows, fractions)


def build_anneal(cfg: dict, seed_override=None) -> AnnealConfig:
    params = dict(cfg.get("anneal", {}))
    if seed_override is not None:
        params["seed"] = seed_override
    elif "seed" in cfg and "seed" not in params:
        params["seed"] = cfg["seed"]
    return AnnealConfig(**params)


def build_cost_specs(cfg: dict) -> list[CostSpec]:
    if "costs" in cfg:
        return [CostSpec.from_dict(c) for c in cfg["costs"]]
    if "cost" in cfg:
        return [CostSpec.from_dict(cfg["cost"])]
    raise ValueError("config must define 'cost' or 'costs'")


def cmd_synth(args) -> int:
    cfg = load_config(args.config)
    series, _ = build_series(cfg.get("dataset", {}))
    save_csv(series, args.out)
    print(f"wrote {len(series)} samples to {args.out}")
    return 0


def cmd_train(args) -> int:
    cfg = load_config(args.config)
    data = build_dataset(cfg.get("dataset", {}))
    spec = build_cost_specs(cfg)[0]
    config = build_anneal(cfg, seed_override=args.seed)
    hidden = args.hidden or cfg.get("hidden", 10)
    result = multi_restart(data, spec, config, hidden=hidden)
    with open(args.model_out, "w", encoding="utf-8") as fh:
        fh.write(result.model.to_json())
    if args.trace_out:
        result.trace.to_jsonl(args.trace_out)
    m = result.trace.final_metrics
    print(
        f"best cost {result.best_cost:.6f}  converged={result.trace.converged}  "
        f"val PICP {m.picp:.4f}  val PINAW {m.pinaw:.4f}"
    )
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    data = build_dataset(cfg.get("dataset", {}))
    spec = build_cost_specs(cfg)[0]
    config = build_anneal(cfg, seed_override=args.seed)
    sizes = cfg.get("sizes", DEFAULT_SIZES)
    result = bench_mod.size_sweep(data, spec, config, sizes=sizes)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(asdict(result), fh, indent=2)
        fh.write("\n")
    print(f"chosen hidden size: {result.chosen_size}")
    return 0


def cmd_bench(args) -> int:
    cfg = load_config(args.config)
    data = build_dataset(cfg.get("dataset", {}))
    specs = build_cost_specs(cfg)
    config = build_anneal(cfg, seed_override=args.seed)
    n_trials = args.n_trials or cfg.get("n_trials", 20)
    hidden = args.hidden or cfg.get("hidden", 10)
    stats = bench_mod.compare_costs(
        data, specs, config, n_trials, hidden=hidden, master_seed=config.seed
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump([asdict(s) for s in stats], fh, indent=2, sort_keys=True)
        fh.write("\n")
    table = bench_mod.format_table(stats)
    if args.table_out:
        with open(args.table_out, "w", encoding="utf-8") as fh:
            fh.write(table + "\n")
    print(table)
    return 0


def cmd_plotdata(args) -> int:
    cfg = load_config(args.config)
    data = build_dataset(cfg.get("dataset", {}))
    spec = build_cost_specs(cfg)[0]
    config = build_anneal(cfg, seed_override=args.seed)
    alphas = cfg.get("alphas", [0.20, 0.05, 0.01])
    hidden = args.hidden or cfg.get("hidden", 10)
    bench_mod.emit_plot_data(data, spec, config, alphas, args.out, hidden=hidden)
    print(f"wrote plot data for alphas {alphas} to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="lubench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="override master seed")

    p = sub.add_parser("synth", help="generate synthetic series as CSV")
    common(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="train one model")
    common(p)
    p.add_argument("--hidden", type=int, default=None)
    p.add_argument("--model-out", required=True)
    p.add_argument("--trace-out", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("sweep", help="hidden-size sweep")
    common(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="multi-trial statistics")
    common(p)
    p.add_argument("--hidden", type=int, default=None)
    p.add_argument("--n-trials", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--table-out", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("plotdata", help="emit PI plot data as CSV")
    common(p)
    p.add_argument("--hidden", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plotdata)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
