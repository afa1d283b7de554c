"""Scenario configuration, seeding, and batch simulation.

A scenario fixes the landscape family (n, m, k_ex, pattern), the search
strategy and its parameters, and the experiment size: ``landscapes``
independent landscapes times ``runs_per_landscape`` runs of ``periods``
periods each.  Everything is derived deterministically from
``master_seed``:

* landscape i        <- SeedSequence((master_seed, 1, i))
* run (i, j)         <- SeedSequence((master_seed, 2, i, j)), from which
  suffix 0 draws the initial configuration and suffix 1 + r keys manager
  r's per-period substreams.

Landscape and run seeds do not depend on the strategy, so scenarios that
differ only in strategy face identical landscapes and starting points.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from numpy.random import SeedSequence, default_rng

from .landscape import PATTERNS, Landscape, build_structure, generate_landscape
from .organization import (
    ASPIRATION_DELTAS,
    FROZEN,
    NOISE_MODES,
    NOISE_PERSISTENCE,
    REALIZED,
    RELATIVE,
    ManagerStreams,
    Organization,
    step_period,
)
from .strategies import (
    SEQUENCE_POLICIES,
    SPACE_RULES,
    STRATEGY_NAMES,
    strategy_from_name,
)

# half-width multiplier for a 99.9% two-sided normal confidence interval
CI_Z = 3.2905

GLOBAL_MAX_TOL = 1e-9


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation scenario.  Defaults are the baseline experiment:
    12 decisions, 4 managers, 250 periods, 2500 runs (100 landscapes x 25),
    5% relative evaluation error, adaptation rates 0.5."""

    n: int = 12
    m: int = 4
    periods: int = 250
    landscapes: int = 100
    runs_per_landscape: int = 25
    k_ex: int = 0
    pattern: str = "distributed"
    strategy: str = "satisficing"
    sigma: float = 0.038
    alpha: float = 0.5
    beta: float = 0.5
    a0: float = 0.0
    s_max0: int = 2
    master_seed: int = 2010
    noise_mode: str = RELATIVE
    noise_persistence: str = FROZEN
    space_update_rule: str = "always"
    aspiration_delta: str = REALIZED
    sequence_policy: str = "closest_first"

    @property
    def block_size(self) -> int:
        return self.n // self.m if self.m else 0

    @property
    def total_runs(self) -> int:
        return self.landscapes * self.runs_per_landscape

    def validate(self) -> None:
        if self.n < 1 or self.m < 1:
            raise ValueError(f"n and m must be positive, got n={self.n}, m={self.m}")
        if self.n % self.m != 0:
            raise ValueError(f"n={self.n} is not divisible into m={self.m} equal blocks")
        block_size = self.n // self.m
        if not 0 <= self.k_ex <= self.n - block_size:
            raise ValueError(
                f"k_ex={self.k_ex} out of range [0, {self.n - block_size}]"
            )
        if self.pattern not in PATTERNS:
            raise ValueError(f"unknown interaction pattern {self.pattern!r}")
        if self.periods < 1:
            raise ValueError(f"periods={self.periods} must be at least 1")
        if self.landscapes < 1 or self.runs_per_landscape < 1:
            raise ValueError("landscapes and runs_per_landscape must be at least 1")
        if self.strategy not in STRATEGY_NAMES:
            raise ValueError(
                f"unknown strategy {self.strategy!r}; expected one of {STRATEGY_NAMES}"
            )
        if self.strategy == "hc2" and block_size < 2:
            raise ValueError("strategy hc2 needs blocks of at least 2 decisions")
        if self.strategy == "hc6" and block_size < 3:
            raise ValueError("strategy hc6 needs blocks of at least 3 decisions")
        if self.sigma < 0.0:
            raise ValueError(f"sigma={self.sigma} must be nonnegative")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha={self.alpha} outside [0, 1]")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta={self.beta} outside [0, 1]")
        if not 1 <= self.s_max0 <= (1 << block_size) - 1:
            raise ValueError(
                f"s_max0={self.s_max0} outside [1, {(1 << block_size) - 1}]"
            )
        if not 0 <= self.master_seed < (1 << 64):
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")
        if self.noise_mode not in NOISE_MODES:
            raise ValueError(f"unknown noise mode {self.noise_mode!r}")
        if self.noise_persistence not in NOISE_PERSISTENCE:
            raise ValueError(f"unknown noise persistence {self.noise_persistence!r}")
        if self.space_update_rule not in SPACE_RULES:
            raise ValueError(
                f"unknown search-space update rule {self.space_update_rule!r}"
            )
        if self.aspiration_delta not in ASPIRATION_DELTAS:
            raise ValueError(f"unknown aspiration delta mode {self.aspiration_delta!r}")
        if self.sequence_policy not in SEQUENCE_POLICIES:
            raise ValueError(f"unknown sequence policy {self.sequence_policy!r}")

    def to_dict(self) -> dict:
        return asdict(self)


# accepted spellings for config keys beyond the field names themselves
KEY_ALIASES = {
    "T": "periods",
    "kEx": "k_ex",
    "runsPerLandscape": "runs_per_landscape",
    "sMax0": "s_max0",
    "masterSeed": "master_seed",
    "noiseMode": "noise_mode",
    "noisePersistence": "noise_persistence",
    "spaceUpdateRule": "space_update_rule",
    "aspirationDelta": "aspiration_delta",
    "sequencePolicy": "sequence_policy",
}

_FIELD_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}


def resolve_key(key: str) -> str:
    field = KEY_ALIASES.get(key, key)
    if field not in _FIELD_TYPES:
        raise ValueError(f"unknown configuration key {key!r}")
    return field


def coerce_setting(key: str, raw: str) -> tuple[str, object]:
    """Parse one KEY=VALUE override; numeric fields get int/float parsing."""
    field = resolve_key(key)
    kind = _FIELD_TYPES[field]
    try:
        if kind == "int":
            return field, int(raw)
        if kind == "float":
            return field, float(raw)
    except ValueError:
        raise ValueError(f"configuration key {key!r} expects a number, got {raw!r}")
    return field, raw


def config_from_dict(data: dict) -> ScenarioConfig:
    resolved = {}
    for key, value in data.items():
        field = resolve_key(key)
        if field in resolved:
            raise ValueError(f"configuration key {key!r} given more than once")
        resolved[field] = value
    return ScenarioConfig(**resolved)


def landscape_entropy(master_seed: int, index: int) -> tuple[int, int, int]:
    return (master_seed, 1, index)


def run_entropy(master_seed: int, landscape_index: int, run_index: int) -> tuple[int, ...]:
    return (master_seed, 2, landscape_index, run_index)


def build_scenario_landscape(scenario: ScenarioConfig, index: int) -> Landscape:
    """Landscape ``index`` of the scenario, reproducible from the seed alone."""
    entropy = landscape_entropy(scenario.master_seed, index)
    rng = default_rng(SeedSequence(entropy))
    structure = build_structure(scenario.n, scenario.m, scenario.k_ex,
                                scenario.pattern, rng)
    return generate_landscape(structure, rng, seed=entropy)


@dataclass(slots=True)
class RunMetrics:
    """Summary of one run.  Performance is normalized by the landscape's
    global maximum; series carry the initial state in row 0."""

    early_gain: float
    final_perf: float
    found_global_max: bool
    alteration_ratio: float
    v_norm: np.ndarray        # (periods + 1,)
    aspiration: np.ndarray    # (periods + 1, m)
    search_space: np.ndarray  # (periods + 1, m)


@dataclass(slots=True)
class RunTrace:
    """Per-period detail of one run, aligned with RunMetrics series."""

    v_star: float
    v: np.ndarray               # (periods + 1,) raw performance
    altered: np.ndarray         # (periods,) 0/1
    moved: np.ndarray           # (periods, m) 0/1 per manager
    evaluated: np.ndarray       # (periods, m) alternatives inspected
    realized_delta: np.ndarray  # (periods, m)
    aspiration: np.ndarray      # (periods + 1, m)
    search_space: np.ndarray    # (periods + 1, m)


def _run(scenario: ScenarioConfig, landscape: Landscape, run_seed,
         collect_trace: bool) -> tuple[RunMetrics, RunTrace | None]:
    entropy = (run_seed,) if isinstance(run_seed, int) else tuple(run_seed)
    n, m, periods = scenario.n, scenario.m, scenario.periods

    d0_rng = default_rng(SeedSequence((*entropy, 0)))
    config = int(d0_rng.integers(0, 1 << n))
    streams = ManagerStreams(entropy, m)
    org = Organization.create(
        landscape, config,
        a0=scenario.a0, s_max0=scenario.s_max0,
        alpha=scenario.alpha, beta=scenario.beta,
        sigma=scenario.sigma, noise_mode=scenario.noise_mode,
    )
    if scenario.noise_persistence == FROZEN:
        for r, manager in enumerate(org.managers):
            table = streams.for_period(r, 0).standard_normal(1 << manager.n_bits)
            manager.error_table = table.tolist()
    strategy = strategy_from_name(scenario.strategy, scenario.sequence_policy)
    strategies = [strategy] * m

    v_star = landscape.v_star
    v_norm = np.empty(periods + 1)
    aspiration = np.empty((periods + 1, m))
    search_space = np.empty((periods + 1, m))
    v_norm[0] = landscape.value_at(config) / v_star
    aspiration[0] = [mgr.aspiration for mgr in org.managers]
    search_space[0] = [mgr.max_search for mgr in org.managers]

    trace = None
    if collect_trace:
        trace = RunTrace(
            v_star=v_star,
            v=np.empty(periods + 1),
            altered=np.zeros(periods, dtype=np.int8),
            moved=np.zeros((periods, m), dtype=np.int8),
            evaluated=np.zeros((periods, m), dtype=np.int32),
            realized_delta=np.empty((periods, m)),
            aspiration=aspiration,
            search_space=search_space,
        )
        trace.v[0] = landscape.value_at(config)

    altered_count = 0
    rule = scenario.space_update_rule
    delta_mode = scenario.aspiration_delta
    for t in range(1, periods + 1):
        outcome = step_period(org, landscape, strategies, streams,
                              space_update_rule=rule, aspiration_delta=delta_mode)
        v_norm[t] = outcome.v / v_star
        aspiration[t] = outcome.aspiration
        search_space[t] = outcome.max_search
        altered_count += outcome.altered
        if trace is not None:
            trace.v[t] = outcome.v
            trace.altered[t - 1] = outcome.altered
            trace.moved[t - 1] = [c is not None for c in outcome.chosen]
            trace.evaluated[t - 1] = outcome.evaluated
            trace.realized_delta[t - 1] = outcome.realized_delta

    metrics = RunMetrics(
        early_gain=float(v_norm[min(10, periods)] - v_norm[0]),
        final_perf=float(v_norm[periods]),
        found_global_max=abs(landscape.value_at(org.config) - v_star) <= GLOBAL_MAX_TOL,
        alteration_ratio=altered_count / periods if periods else 0.0,
        v_norm=v_norm,
        aspiration=aspiration,
        search_space=search_space,
    )
    return metrics, trace


def run_single(scenario: ScenarioConfig, landscape: Landscape, run_seed) -> RunMetrics:
    """One run of one organization on one landscape."""
    return _run(scenario, landscape, run_seed, collect_trace=False)[0]


def run_single_with_trace(
    scenario: ScenarioConfig, landscape: Landscape, run_seed
) -> tuple[RunMetrics, RunTrace]:
    metrics, trace = _run(scenario, landscape, run_seed, collect_trace=True)
    return metrics, trace


@dataclass(slots=True)
class ScenarioSummary:
    """Means over all runs of a scenario; final_perf_ci is the half-width
    of a 99.9% confidence interval (None for a single run).  The series
    average managers as well as runs."""

    scenario: ScenarioConfig
    runs: int
    early_gain: float
    final_perf: float
    final_perf_ci: float | None
    global_max_freq: float
    alteration_ratio: float
    v_norm: np.ndarray        # (periods + 1,)
    aspiration: np.ndarray    # (periods + 1,)
    search_space: np.ndarray  # (periods + 1,)


def _landscape_batch(args: tuple[ScenarioConfig, int]):
    """All runs on one landscape: per-run scalars plus summed series."""
    scenario, index = args
    landscape = build_scenario_landscape(scenario, index)
    runs = scenario.runs_per_landscape
    scalars = np.empty((runs, 4))
    v_sum = np.zeros(scenario.periods + 1)
    a_sum = np.zeros(scenario.periods + 1)
    s_sum = np.zeros(scenario.periods + 1)
    for j in range(runs):
        seed = run_entropy(scenario.master_seed, index, j)
        rm = run_single(scenario, landscape, seed)
        scalars[j] = (rm.early_gain, rm.final_perf,
                      rm.found_global_max, rm.alteration_ratio)
        v_sum += rm.v_norm
        a_sum += rm.aspiration.mean(axis=1)
        s_sum += rm.search_space.mean(axis=1)
    return scalars, v_sum, a_sum, s_sum


def run_scenario(scenario: ScenarioConfig, workers: int | None = None) -> ScenarioSummary:
    """Simulate the whole scenario.

    workers > 1 distributes landscapes over processes; results are folded
    in landscape order, so the summary is identical for any worker count.
    """
    scenario.validate()
    batches = [(scenario, i) for i in range(scenario.landscapes)]
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_landscape_batch, batches))
    else:
        results = [_landscape_batch(b) for b in batches]

    scalars = np.concatenate([r[0] for r in results])
    v_sum = np.zeros(scenario.periods + 1)
    a_sum = np.zeros(scenario.periods + 1)
    s_sum = np.zeros(scenario.periods + 1)
    for _, v, a, s in results:
        v_sum += v
        a_sum += a
        s_sum += s

    total = len(scalars)
    final = scalars[:, 1]
    ci = None
    if total > 1:
        ci = float(CI_Z * final.std(ddof=1) / math.sqrt(total))
    return ScenarioSummary(
        scenario=scenario,
        runs=total,
        early_gain=float(scalars[:, 0].mean()),
        final_perf=float(final.mean()),
        final_perf_ci=ci,
        global_max_freq=float(scalars[:, 2].mean()),
        alteration_ratio=float(scalars[:, 3].mean()),
        v_norm=v_sum / total,
        aspiration=a_sum / total,
        search_space=s_sum / total,
    )


def sensitivity_sweep(
    base: ScenarioConfig,
    kex_values: tuple[int, ...] = (0, 1, 2, 3, 4, 5),
    strategies: tuple[str, ...] = STRATEGY_NAMES,
    workers: int | None = None,
) -> list[ScenarioSummary]:
    """Cross every strategy with every k_ex.  Scenarios share master_seed,
    so all strategies run on identical landscapes at each k_ex."""
    summaries = []
    for name in strategies:
        for k_ex in kex_values:
            scenario = replace(base, strategy=name, k_ex=k_ex)
            summaries.append(run_scenario(scenario, workers=workers))
    return summaries
