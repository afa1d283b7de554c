"""Manager agents and the simultaneous-move period protocol.

An organization splits n binary decisions into m contiguous blocks, one
per manager.  Each period every manager searches alternatives to their own
block against everyone else's previous-period decisions, the proposals are
composed into the new configuration, and managers then observe their
block's realized performance and adapt.

Managers evaluate candidate options with noise (a fresh Gaussian error per
look) but remember their own block's realized performance exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

if TYPE_CHECKING:
    from .landscape import Landscape

ADDITIVE = "additive"  # perceived = actual + sigma * e
RELATIVE = "relative"  # perceived = actual * (1 + sigma * e)
NOISE_MODES = (ADDITIVE, RELATIVE)

FRESH = "fresh"    # a new error per evaluation
FROZEN = "frozen"  # one error per option, drawn at run start, constant thereafter
NOISE_PERSISTENCE = (FRESH, FROZEN)

REALIZED = "realized"    # aspiration tracks the block's realized gain
PERCEIVED = "perceived"  # aspiration tracks the gain the manager thought they took
ASPIRATION_DELTAS = (REALIZED, PERCEIVED)


@dataclass(slots=True)
class ManagerState:
    """One manager: their block, adaptation parameters, and mutable state.

    lo is the index of the block's first decision; the block spans bits
    [lo, lo + n_bits) of the organization's configuration.
    """

    index: int
    lo: int
    n_bits: int
    aspiration: float = 0.0
    max_search: int = 2
    alpha: float = 0.5
    beta: float = 0.5
    sigma: float = 0.0
    noise_mode: str = ADDITIVE
    last_own_performance: float = 0.0
    error_table: list[float] | None = None

    def __post_init__(self):
        if self.n_bits < 1:
            raise ValueError(f"manager {self.index} has an empty block")
        if not 1 <= self.max_search <= (1 << self.n_bits) - 1:
            raise ValueError(
                f"max_search={self.max_search} outside [1, {(1 << self.n_bits) - 1}]"
            )
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha={self.alpha} outside [0, 1]")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta={self.beta} outside [0, 1]")
        if self.sigma < 0.0:
            raise ValueError(f"sigma={self.sigma} must be nonnegative")
        if self.noise_mode not in NOISE_MODES:
            raise ValueError(f"unknown noise mode {self.noise_mode!r}")

    def status_quo_performance(self) -> float:
        """The remembered (error-free) performance of the current block state."""
        return self.last_own_performance


def perceive(
    manager: ManagerState,
    landscape: Landscape,
    candidate: int,
    frozen_others: int,
    rng: Generator,
) -> float:
    """Manager's noisy ex-ante estimate of their block performance if they
    implemented candidate while all other blocks stay at frozen_others.

    frozen_others must have the manager's own block bits cleared.  The unit
    error is either the manager's standing misjudgment of that option
    (error_table, one entry per own-block configuration, constant for the
    whole run) or a fresh Gaussian draw per call when no table is set.
    """
    actual = landscape.block_value(manager.index, frozen_others | (candidate << manager.lo))
    if manager.error_table is not None:
        error = manager.error_table[candidate]
    else:
        error = rng.standard_normal()
    if manager.noise_mode == RELATIVE:
        return actual * (1.0 + manager.sigma * error)
    return actual + manager.sigma * error


class ManagerStreams:
    """Per-(manager, period) random substreams for one run.

    Manager r owns a counter-based generator keyed from
    SeedSequence((*run_seed, 1 + r)); suffix 0 is reserved for the caller
    (initial configuration).  for_period() rewinds the counter to a lane
    indexed by the period, so draws depend only on (run_seed, manager,
    period, draw index) -- never on how much randomness other managers or
    earlier periods consumed.
    """

    def __init__(self, run_seed: int | Sequence[int], n_managers: int):
        entropy = (run_seed,) if isinstance(run_seed, int) else tuple(run_seed)
        self._streams = []
        for r in range(n_managers):
            key = SeedSequence((*entropy, 1 + r)).generate_state(2, np.uint64)
            bit_gen = Philox(key=key)
            self._streams.append((bit_gen, Generator(bit_gen)))

    def for_period(self, manager_index: int, period: int) -> Generator:
        bit_gen, gen = self._streams[manager_index]
        state = bit_gen.state
        state["state"]["counter"][:] = (0, period, 0, 0)
        state["buffer_pos"] = 4
        state["has_uint32"] = 0
        state["uinteger"] = 0
        bit_gen.state = state
        return gen


@dataclass
class Organization:
    """Current state of the decision-making organization."""

    config: int
    managers: list[ManagerState]
    period: int = 0

    @classmethod
    def create(
        cls,
        landscape: Landscape,
        config: int,
        *,
        a0: float = 0.0,
        s_max0: int = 2,
        alpha: float = 0.5,
        beta: float = 0.5,
        sigma: float = 0.0,
        noise_mode: str = ADDITIVE,
    ) -> Organization:
        """Managers at their block boundaries, remembering the realized
        performance of the initial configuration."""
        block_size = landscape.n // landscape.m
        managers = [
            ManagerState(
                index=r,
                lo=r * block_size,
                n_bits=block_size,
                aspiration=a0,
                max_search=s_max0,
                alpha=alpha,
                beta=beta,
                sigma=sigma,
                noise_mode=noise_mode,
                last_own_performance=landscape.block_value(r, config),
            )
            for r in range(landscape.m)
        ]
        return cls(config=config, managers=managers)


@dataclass(slots=True)
class PeriodOutcome:
    """Everything one period produced, with post-update manager state."""

    period: int
    config: int
    v: float
    altered: bool
    chosen: list[int | None]
    evaluated: list[int]
    satisfied: list[bool | None]
    realized_delta: list[float]
    aspiration: list[float]
    max_search: list[int]


def step_period(
    org: Organization,
    landscape: Landscape,
    strategies: Sequence,
    streams: ManagerStreams,
    *,
    space_update_rule: str = "always",
    aspiration_delta: str = REALIZED,
    manager_order: Sequence[int] | None = None,
    audit: list | None = None,
) -> PeriodOutcome:
    """Advance the organization by one period.

    All managers search against the frozen previous-period configuration
    (manager_order only reorders the searches; results cannot depend on
    it), their proposals compose the new configuration, and each manager
    then updates aspiration, search cap, and remembered performance from
    their block's realized outcome.
    """
    t = org.period + 1
    frozen = org.config
    managers = org.managers
    order = range(len(managers)) if manager_order is None else manager_order

    outcomes: list = [None] * len(managers)
    for r in order:
        manager = managers[r]
        rng = streams.for_period(r, t)
        walk: list | None = None
        if audit is not None:
            walk = []
        outcomes[r] = strategies[r].search(manager, landscape, frozen, rng, walk)
        if audit is not None:
            audit.append({
                "period": t,
                "manager": r,
                "bar": manager.aspiration,
                "cap": manager.max_search,
                "status_quo_performance": manager.last_own_performance,
                "walk": walk,
                "chosen": outcomes[r].chosen,
            })

    new_config = frozen
    for r, outcome in enumerate(outcomes):
        if outcome.chosen is not None:
            manager = managers[r]
            block_mask = ((1 << manager.n_bits) - 1) << manager.lo
            new_config = (new_config & ~block_mask) | (outcome.chosen << manager.lo)

    v = landscape.value_at(new_config)
    altered = new_config != frozen

    realized_deltas = []
    for r, manager in enumerate(managers):
        own = landscape.block_value(r, new_config)
        delta = own - manager.last_own_performance
        realized_deltas.append(delta)
        outcome = outcomes[r]
        if aspiration_delta == REALIZED:
            feedback = delta
        else:
            feedback = outcome.perceived_delta if outcome.chosen is not None else 0.0
        strategies[r].update(manager, outcome, feedback, space_update_rule)
        manager.last_own_performance = own

    org.config = new_config
    org.period = t
    return PeriodOutcome(
        period=t,
        config=new_config,
        v=v,
        altered=altered,
        chosen=[o.chosen for o in outcomes],
        evaluated=[o.evaluated for o in outcomes],
        satisfied=[o.satisfied for o in outcomes],
        realized_delta=realized_deltas,
        aspiration=[mgr.aspiration for mgr in managers],
        max_search=[mgr.max_search for mgr in managers],
    )
