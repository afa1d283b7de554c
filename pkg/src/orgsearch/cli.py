"""Command-line front end.

Subcommands:

* run             simulate one scenario; writes summary.json, summary.csv,
                  series.csv
* sweep           cross strategies with external-coupling levels; writes
                  sweep.json, sweep.csv
* trace           replay a single run period by period; writes trace.csv
* dump-landscape  write one scenario landscape as JSON

Every command writes the fully resolved configuration to
resolved_config.json in the output directory.  Settings come from --config
(a JSON object), then repeatable --set KEY=VALUE overrides, then the
convenience flags (--seed, --strategy, --kex).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .landscape import dump_landscape
from .output import (
    scenario_label,
    write_config_json,
    write_series_csv,
    write_summary_csv,
    write_summary_json,
    write_sweep_json,
    write_trace_csv,
)
from .simulation import (
    ScenarioConfig,
    build_scenario_landscape,
    coerce_setting,
    config_from_dict,
    run_entropy,
    run_single_with_trace,
    run_scenario,
    sensitivity_sweep,
)
from .strategies import STRATEGY_NAMES


def _add_common(parser: argparse.ArgumentParser, workers: bool = True) -> None:
    parser.add_argument("--config", metavar="FILE",
                        help="JSON object of scenario settings")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one scenario setting (repeatable)")
    parser.add_argument("--seed", type=int, metavar="N", help="master seed")
    parser.add_argument("--out", default=".", metavar="DIR",
                        help="output directory (default: current)")
    if workers:
        parser.add_argument("--workers", type=int, metavar="N",
                            help="worker processes (results do not depend on this)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orgsearch",
        description="Simulate decentralized managerial search on rugged "
                    "performance landscapes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario")
    _add_common(p_run)
    p_run.add_argument("--strategy", choices=STRATEGY_NAMES)
    p_run.add_argument("--kex", type=int, metavar="K",
                       help="external dependencies per decision")

    p_sweep = sub.add_parser("sweep", help="strategy x coupling sensitivity table")
    _add_common(p_sweep)
    p_sweep.add_argument("--kex", default="0,1,2,3,4,5", metavar="LIST",
                         help="comma-separated k_ex values (default 0-5)")
    p_sweep.add_argument("--strategies", default=",".join(STRATEGY_NAMES),
                         metavar="LIST", help="comma-separated strategy names")

    p_trace = sub.add_parser("trace", help="period-by-period log of one run")
    _add_common(p_trace, workers=False)
    p_trace.add_argument("--strategy", choices=STRATEGY_NAMES)
    p_trace.add_argument("--kex", type=int, metavar="K")
    p_trace.add_argument("--landscape", type=int, default=0, metavar="I")
    p_trace.add_argument("--run", type=int, default=0, metavar="J")

    p_dump = sub.add_parser("dump-landscape", help="write one landscape as JSON")
    _add_common(p_dump, workers=False)
    p_dump.add_argument("--kex", type=int, metavar="K")
    p_dump.add_argument("--landscape", type=int, default=0, metavar="I")

    return parser


def _build_scenario(args: argparse.Namespace) -> ScenarioConfig:
    data = {}
    if args.config:
        loaded = json.loads(Path(args.config).read_text())
        if not isinstance(loaded, dict):
            raise ValueError(f"config file {args.config} must hold a JSON object")
        data = loaded
    scenario = config_from_dict(data)

    overrides = {}
    for setting in args.set:
        key, sep, raw = setting.partition("=")
        if not sep:
            raise ValueError(f"--set expects KEY=VALUE, got {setting!r}")
        field, value = coerce_setting(key.strip(), raw.strip())
        overrides[field] = value
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    strategy = getattr(args, "strategy", None)
    if strategy is not None:
        overrides["strategy"] = strategy
    k_ex = getattr(args, "kex", None)
    if args.command != "sweep" and k_ex is not None:
        overrides["k_ex"] = k_ex

    scenario = replace(scenario, **overrides)
    scenario.validate()
    return scenario


def _prepare_out(args: argparse.Namespace, scenario: ScenarioConfig) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_config_json(scenario, out / "resolved_config.json")
    return out


def _summary_line(summary) -> str:
    ci = summary.final_perf_ci
    return (f"{scenario_label(summary.scenario)}: "
            f"final {summary.final_perf:.4f}"
            + (f" +-{ci:.4f}" if ci is not None else "")
            + f", early gain {summary.early_gain:+.4f}"
            f", global max {summary.global_max_freq:.1%}"
            f", altered {summary.alteration_ratio:.1%}"
            f" ({summary.runs} runs)")


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = _build_scenario(args)
    out = _prepare_out(args, scenario)
    summary = run_scenario(scenario, workers=args.workers)
    write_summary_json(summary, out / "summary.json")
    write_summary_csv([summary], out / "summary.csv")
    write_series_csv([summary], out / "series.csv")
    print(_summary_line(summary))
    return 0


def _parse_int_list(raw: str, what: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in raw.split(",") if part.strip() != "")
    except ValueError:
        raise ValueError(f"{what} expects comma-separated integers, got {raw!r}")
    if not values:
        raise ValueError(f"{what} must name at least one value")
    return values


def _cmd_sweep(args: argparse.Namespace) -> int:
    scenario = _build_scenario(args)
    kex_values = _parse_int_list(args.kex, "--kex")
    strategies = tuple(s.strip() for s in args.strategies.split(",") if s.strip())
    if not strategies:
        raise ValueError("--strategies must name at least one strategy")
    out = _prepare_out(args, scenario)
    summaries = sensitivity_sweep(scenario, kex_values, strategies,
                                  workers=args.workers)
    write_sweep_json(summaries, out / "sweep.json")
    write_summary_csv(summaries, out / "sweep.csv")
    for summary in summaries:
        print(_summary_line(summary))
    return 0


def _cmd_trace(args: argparse.Namespace) -> int:
    scenario = _build_scenario(args)
    if not 0 <= args.landscape < scenario.landscapes:
        raise ValueError(f"--landscape {args.landscape} out of range "
                         f"[0, {scenario.landscapes - 1}]")
    if not 0 <= args.run < scenario.runs_per_landscape:
        raise ValueError(f"--run {args.run} out of range "
                         f"[0, {scenario.runs_per_landscape - 1}]")
    out = _prepare_out(args, scenario)
    landscape = build_scenario_landscape(scenario, args.landscape)
    seed = run_entropy(scenario.master_seed, args.landscape, args.run)
    metrics, trace = run_single_with_trace(scenario, landscape, seed)
    run_id = f"{args.landscape}:{args.run}"
    write_trace_csv(trace, run_id, out / "trace.csv")
    print(f"run {run_id}: final {metrics.final_perf:.4f}, "
          f"altered {metrics.alteration_ratio:.1%}, "
          f"global max {'yes' if metrics.found_global_max else 'no'}")
    return 0


def _cmd_dump_landscape(args: argparse.Namespace) -> int:
    scenario = _build_scenario(args)
    if not 0 <= args.landscape < scenario.landscapes:
        raise ValueError(f"--landscape {args.landscape} out of range "
                         f"[0, {scenario.landscapes - 1}]")
    out = _prepare_out(args, scenario)
    landscape = build_scenario_landscape(scenario, args.landscape)
    dump_landscape(landscape, out / "landscape.json")
    print(f"landscape {args.landscape}: optimum {landscape.v_star:.6f} "
          f"at {''.join(map(str, landscape.optimum_config))}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "trace": _cmd_trace,
    "dump-landscape": _cmd_dump_landscape,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
