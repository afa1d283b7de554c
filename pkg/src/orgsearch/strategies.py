"""Search strategies: aspiration-driven satisficing and steepest-ascent hill climbing.

Each period a manager searches the alternatives to their own block of
decisions while everyone else's decisions stay frozen at the status quo.
Block alternatives are encoded as ints over the block's bits (bit 0 =
first decision of the block).

Satisficers walk alternatives closest-first and take the first one whose
perceived value clears their aspiration; both the aspiration and the
number of alternatives they are willing to inspect adapt over time.
Hill climbers inspect a fixed option set and move only on the steepest
perceived strict improvement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, ClassVar

from .organization import perceive

if TYPE_CHECKING:
    import numpy as np

    from .landscape import Landscape
    from .organization import ManagerState

CLOSEST_FIRST = "closest_first"
RANDOM_ORDER = "random"
SEQUENCE_POLICIES = (CLOSEST_FIRST, RANDOM_ORDER)

# when the willingness-to-search update fires
ALWAYS_RULE = "always"      # every period, widening or narrowing toward use
TEXT_RULE = "text"          # only after an exhausted search that satisfied nothing
EQUATION_RULE = "equation"  # only after a full-allowance search that met the bar
SPACE_RULES = (ALWAYS_RULE, TEXT_RULE, EQUATION_RULE)

STRATEGY_NAMES = ("satisficing", "hc2", "hc6")


@lru_cache(maxsize=None)
def flip_masks_by_distance(n_bits: int) -> tuple[tuple[int, ...], ...]:
    """Nonzero XOR masks over n_bits grouped by popcount; index h-1 = distance h."""
    classes: list[list[int]] = [[] for _ in range(n_bits)]
    for mask in range(1, 1 << n_bits):
        classes[mask.bit_count() - 1].append(mask)
    return tuple(tuple(c) for c in classes)


def closest_first_sequence(status_quo: int, n_bits: int, rng: np.random.Generator) -> list[int]:
    """All 2**n_bits - 1 alternatives to status_quo, ascending Hamming
    distance, uniformly shuffled within each distance class."""
    sequence = []
    for cls in flip_masks_by_distance(n_bits):
        masks = list(cls)
        rng.shuffle(masks)
        sequence.extend(status_quo ^ mask for mask in masks)
    return sequence


def random_sequence(status_quo: int, n_bits: int, rng: np.random.Generator) -> list[int]:
    """All alternatives to status_quo in one uniform shuffle."""
    masks = list(range(1, 1 << n_bits))
    rng.shuffle(masks)
    return [status_quo ^ mask for mask in masks]


def search_sequence(
    status_quo: int, n_bits: int, rng: np.random.Generator, policy: str = CLOSEST_FIRST
) -> list[int]:
    if policy == CLOSEST_FIRST:
        return closest_first_sequence(status_quo, n_bits, rng)
    if policy == RANDOM_ORDER:
        return random_sequence(status_quo, n_bits, rng)
    raise ValueError(f"unknown sequence policy {policy!r}")


@dataclass(slots=True)
class SearchOutcome:
    """What one manager's search produced in one period.

    chosen is the block alternative to implement, or None to keep the
    status quo.  satisfied/exhausted are satisficing bookkeeping (None for
    hill climbers); perceived_delta is the chosen option's perceived gain.
    """

    chosen: int | None
    evaluated: int
    satisfied: bool | None = None
    exhausted: bool | None = None
    perceived_delta: float | None = None


def satisficing_search(
    manager: ManagerState,
    landscape: Landscape,
    frozen_config: int,
    rng: np.random.Generator,
    sequence_policy: str = CLOSEST_FIRST,
    walk: list | None = None,
) -> SearchOutcome:
    """Inspect up to manager.max_search alternatives in sequence order and
    take the first whose perceived gain over the remembered status quo
    meets the aspiration.  Exhausting the allowance leaves the status quo.

    frozen_config is the full previous-period configuration; optional walk
    collects (hamming distance, perceived gain) per inspected alternative.
    """
    lo = manager.lo
    block_mask = (1 << manager.n_bits) - 1
    status_quo = (frozen_config >> lo) & block_mask
    base = frozen_config & ~(block_mask << lo)
    sequence = search_sequence(status_quo, manager.n_bits, rng, sequence_policy)
    bar = manager.aspiration
    remembered = manager.last_own_performance
    limit = min(manager.max_search, len(sequence))
    evaluated = 0
    for candidate in sequence[:limit]:
        evaluated += 1
        delta = perceive(manager, landscape, candidate, base, rng) - remembered
        if walk is not None:
            walk.append(((candidate ^ status_quo).bit_count(), delta))
        if delta >= bar:
            return SearchOutcome(candidate, evaluated, satisfied=True,
                                 exhausted=False, perceived_delta=delta)
    return SearchOutcome(None, evaluated, satisfied=False, exhausted=True)


def hill_climb_search(
    manager: ManagerState,
    landscape: Landscape,
    frozen_config: int,
    option_spec: tuple[tuple[int, int], ...],
    rng: np.random.Generator,
) -> SearchOutcome:
    """Inspect, per (count, distance) entry, count alternatives sampled
    without replacement at that Hamming distance; move to the one with the
    highest perceived value iff it strictly beats the remembered status
    quo.  Ties go to the earliest inspected."""
    lo = manager.lo
    block_mask = (1 << manager.n_bits) - 1
    status_quo = (frozen_config >> lo) & block_mask
    base = frozen_config & ~(block_mask << lo)
    classes = flip_masks_by_distance(manager.n_bits)
    remembered = manager.last_own_performance
    best = None
    best_value = -math.inf
    evaluated = 0
    for count, distance in option_spec:
        if not 1 <= distance <= manager.n_bits:
            raise ValueError(f"hamming distance {distance} infeasible for a "
                             f"{manager.n_bits}-decision block")
        masks = list(classes[distance - 1])
        if count > len(masks):
            raise ValueError(f"cannot sample {count} alternatives at distance "
                             f"{distance} in a {manager.n_bits}-decision block")
        rng.shuffle(masks)
        for mask in masks[:count]:
            candidate = status_quo ^ mask
            evaluated += 1
            value = perceive(manager, landscape, candidate, base, rng)
            if value > best_value:
                best_value = value
                best = candidate
    if best_value > remembered:
        return SearchOutcome(best, evaluated, perceived_delta=best_value - remembered)
    return SearchOutcome(None, evaluated)


def update_aspiration(aspiration: float, realized_delta: float, alpha: float) -> float:
    """Exponentially weighted aspiration: alpha * latest gain + (1 - alpha) * old."""
    return alpha * realized_delta + (1.0 - alpha) * aspiration


def update_search_space(
    max_search: int,
    outcome: SearchOutcome,
    beta: float,
    n_bits: int,
    rule: str = ALWAYS_RULE,
    delta: float = 0.0,
    bar: float = 0.0,
) -> int:
    """Adapt the willingness-to-search cap after one period's search.

    The new cap blends the number of alternatives just inspected plus one
    with the old cap, rounds half up, and is clamped to [1, 2**n_bits - 1].
    An exhausted search therefore nudges the cap up while an early hit
    nudges it down toward the allowance actually needed.

    The rule decides when that blend is applied.  Under "always" it runs
    every period.  Under "text" it runs only after a fruitless exhausted
    search, so the cap never narrows.  Under "equation" it runs only when
    the whole allowance was inspected and the period's gain (delta) met
    the bar in force when the search began.
    """
    if rule == ALWAYS_RULE:
        fire = True
    elif rule == TEXT_RULE:
        fire = bool(outcome.exhausted)
    elif rule == EQUATION_RULE:
        fire = outcome.evaluated == max_search and delta >= bar
    else:
        raise ValueError(f"unknown search-space update rule {rule!r}")
    if not fire:
        return max_search
    blended = beta * (outcome.evaluated + 1) + (1.0 - beta) * max_search
    return max(1, min((1 << n_bits) - 1, math.floor(blended + 0.5)))


@dataclass(frozen=True)
class Satisficing:
    """First-satisfactory-option search with adaptive aspiration and cap."""

    sequence_policy: str = CLOSEST_FIRST
    name: ClassVar[str] = "satisficing"
    adaptive: ClassVar[bool] = True

    def search(self, manager, landscape, frozen_config, rng, walk=None) -> SearchOutcome:
        return satisficing_search(manager, landscape, frozen_config, rng,
                                  self.sequence_policy, walk)

    def update(self, manager, outcome, feedback_delta, space_rule) -> None:
        bar = manager.aspiration
        manager.aspiration = update_aspiration(manager.aspiration, feedback_delta,
                                               manager.alpha)
        manager.max_search = update_search_space(manager.max_search, outcome,
                                                 manager.beta, manager.n_bits,
                                                 space_rule, feedback_delta, bar)


@dataclass(frozen=True)
class HillClimbing:
    """Steepest perceived ascent over a fixed option set, no adaptation."""

    name: str
    option_spec: tuple[tuple[int, int], ...]
    adaptive: ClassVar[bool] = False

    def search(self, manager, landscape, frozen_config, rng, walk=None) -> SearchOutcome:
        return hill_climb_search(manager, landscape, frozen_config,
                                 self.option_spec, rng)

    def update(self, manager, outcome, feedback_delta, space_rule) -> None:
        pass


def strategy_from_name(name: str, sequence_policy: str = CLOSEST_FIRST):
    """Map a strategy name to its object.

    hc2 inspects 2 of the single-flip neighbors; hc6 inspects all single-
    and double-flip neighbors of a 3-decision block (6 of the 7
    alternatives, all but the full reversal).
    """
    if name == "satisficing":
        return Satisficing(sequence_policy)
    if name == "hc2":
        return HillClimbing("hc2", ((2, 1),))
    if name == "hc6":
        return HillClimbing("hc6", ((3, 1), (3, 2)))
    raise ValueError(f"unknown strategy {name!r}; expected one of {STRATEGY_NAMES}")
