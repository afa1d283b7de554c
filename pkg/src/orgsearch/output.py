"""Writers for the delimited and JSON outputs.

Summary tables carry one row per scenario; series files are long-format
(scenario, t, metric, value) and plot-ready; trace files expand a single
run period by period with per-manager detail.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable

from .simulation import RunTrace, ScenarioConfig, ScenarioSummary

SUMMARY_COLUMNS = (
    "strategy", "k_ex", "pattern", "runs",
    "early_gain", "final_perf", "final_perf_ci",
    "global_max_freq", "alteration_ratio",
)

SERIES_METRICS = ("performance", "aspiration", "search_space")


def scenario_label(scenario: ScenarioConfig) -> str:
    return f"{scenario.strategy}_kex{scenario.k_ex}"


def summary_to_dict(summary: ScenarioSummary, include_series: bool = True) -> dict:
    data = {
        "scenario": summary.scenario.to_dict(),
        "runs": summary.runs,
        "metrics": {
            "early_gain": summary.early_gain,
            "final_perf": summary.final_perf,
            "final_perf_ci": summary.final_perf_ci,
            "global_max_freq": summary.global_max_freq,
            "alteration_ratio": summary.alteration_ratio,
        },
    }
    if include_series:
        data["series"] = {
            "performance": summary.v_norm.tolist(),
            "aspiration": summary.aspiration.tolist(),
            "search_space": summary.search_space.tolist(),
        }
    return data


def write_config_json(scenario: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario.to_dict(), indent=2) + "\n")


def write_summary_json(summary: ScenarioSummary, path: str | Path) -> None:
    Path(path).write_text(json.dumps(summary_to_dict(summary), indent=2) + "\n")


def write_sweep_json(summaries: Iterable[ScenarioSummary], path: str | Path) -> None:
    data = [summary_to_dict(s, include_series=False) for s in summaries]
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def _summary_row(summary: ScenarioSummary) -> list:
    cfg = summary.scenario
    ci = "" if summary.final_perf_ci is None else f"{summary.final_perf_ci:.4f}"
    return [
        cfg.strategy, cfg.k_ex, cfg.pattern, summary.runs,
        f"{summary.early_gain:+.4f}", f"{summary.final_perf:.4f}", ci,
        f"{summary.global_max_freq:.4f}", f"{summary.alteration_ratio:.4f}",
    ]


def write_summary_csv(summaries: Iterable[ScenarioSummary], path: str | Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(SUMMARY_COLUMNS)
        for summary in summaries:
            writer.writerow(_summary_row(summary))


def write_series_csv(summaries: Iterable[ScenarioSummary], path: str | Path) -> None:
    """Period series of every summary, one (scenario, t, metric, value) row
    per point, t = 0 included."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(("scenario", "t", "metric", "value"))
        for summary in summaries:
            label = scenario_label(summary.scenario)
            series = (summary.v_norm, summary.aspiration, summary.search_space)
            for metric, values in zip(SERIES_METRICS, series):
                for t, value in enumerate(values):
                    writer.writerow((label, t, metric, f"{value:.6f}"))


def write_trace_csv(trace: RunTrace, run_id: str, path: str | Path) -> None:
    """One row per period with organization-level performance and
    per-manager state after that period's updates.  moved_r is 1 when
    manager r implemented a new option that period."""
    m = trace.aspiration.shape[1]
    header = ["run_id", "t", "v", "v_norm", "altered"]
    for r in range(1, m + 1):
        header += [f"aspiration_{r}", f"max_search_{r}", f"evaluated_{r}",
                   f"moved_{r}", f"realized_delta_{r}"]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for t in range(1, len(trace.v)):
            row = [run_id, t, f"{trace.v[t]:.10g}",
                   f"{trace.v[t] / trace.v_star:.10g}", int(trace.altered[t - 1])]
            for r in range(m):
                row += [
                    f"{trace.aspiration[t, r]:.10g}",
                    int(trace.search_space[t, r]),
                    int(trace.evaluated[t - 1, r]),
                    int(trace.moved[t - 1, r]),
                    f"{trace.realized_delta[t - 1, r]:.10g}",
                ]
            writer.writerow(row)
