"""NK performance landscapes with block-structured interdependencies.

A landscape maps every configuration of ``n`` binary decisions to a
performance value in [0, 1].  Each decision contributes a value drawn
uniformly at random for every combination of its own state and the states
of the ``k`` decisions it depends on; overall performance is the mean of
the ``n`` contributions.  Decisions are partitioned into ``m`` contiguous
equal blocks, one per department head; within a block all decisions depend
on each other, and each block additionally depends on ``k_ex`` external
decisions.

Configurations are represented as ints, with decision ``i`` stored in bit
``i``.  All 2**n configuration values and per-block subtotals are
precomputed as dense arrays so that evaluation during simulation is a
single lookup and the global optimum is known exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

PATTERNS = ("cyclic", "distributed", "random")


def config_to_index(config: Sequence[int]) -> int:
    """Pack a bit sequence (decision i at position i) into an int."""
    index = 0
    for i, bit in enumerate(config):
        if bit not in (0, 1):
            raise ValueError(f"decision {i} must be 0 or 1, got {bit!r}")
        index |= bit << i
    return index


def index_to_config(index: int, n: int) -> tuple[int, ...]:
    """Unpack an int into a tuple of n bits (decision i at position i)."""
    if not 0 <= index < (1 << n):
        raise ValueError(f"configuration index {index} out of range for n={n}")
    return tuple((index >> i) & 1 for i in range(n))


@dataclass(frozen=True)
class InteractionStructure:
    """Who depends on whom: the dependency lists behind a landscape.

    dependencies[i] lists the decisions (excluding i itself) whose state
    enters decision i's contribution, intra-block members first.
    """

    n: int
    m: int
    k_ex: int
    pattern: str
    dependencies: tuple[tuple[int, ...], ...]

    @property
    def block_size(self) -> int:
        return self.n // self.m

    @property
    def k(self) -> int:
        """Dependencies per decision: (block_size - 1) intra plus k_ex external."""
        return self.block_size - 1 + self.k_ex

    def block_of(self, i: int) -> int:
        return i // self.block_size

    def block_range(self, r: int) -> tuple[int, int]:
        """Half-open index range [lo, hi) of block r."""
        if not 0 <= r < self.m:
            raise ValueError(f"block index {r} out of range for m={self.m}")
        lo = r * self.block_size
        return lo, lo + self.block_size


def build_structure(
    n: int,
    m: int,
    k_ex: int,
    pattern: str = "cyclic",
    rng: np.random.Generator | None = None,
) -> InteractionStructure:
    """Build the dependency lists for n decisions split into m equal blocks.

    Intra-block coupling is always full: every decision depends on the
    other block members (ascending order).  External dependencies follow
    ``pattern``:

    * ``cyclic``: every decision of block r depends on the k_ex decisions
      immediately after the block, wrapping around, so a whole block shares
      its external dependencies and each block leans on one neighbor.
    * ``distributed``: each decision's k_ex external dependencies are spread
      round-robin over all other blocks, starting from the decision's
      position within its block modulo two, so coupling touches every block
      and a block's externals span two bit positions per foreign block.
    * ``random``: each decision independently draws k_ex distinct decisions
      outside its own block (requires rng).
    """
    if n < 1 or m < 1:
        raise ValueError(f"n and m must be positive, got n={n}, m={m}")
    if n % m != 0:
        raise ValueError(f"n={n} is not divisible into m={m} equal blocks")
    block_size = n // m
    if not 0 <= k_ex <= n - block_size:
        raise ValueError(
            f"k_ex={k_ex} out of range [0, {n - block_size}] for n={n}, m={m}"
        )
    if pattern not in PATTERNS:
        raise ValueError(f"unknown interaction pattern {pattern!r}")
    if pattern == "random" and rng is None:
        raise ValueError("pattern 'random' requires an rng")

    dependencies = []
    for i in range(n):
        lo = (i // block_size) * block_size
        block = range(lo, lo + block_size)
        intra = [j for j in block if j != i]
        if pattern == "cyclic":
            ext = [(lo + block_size + j) % n for j in range(k_ex)]
        elif pattern == "distributed":
            r = i // block_size
            offset = i - lo
            ext = sorted(
                ((r + 1 + j % (m - 1)) % m) * block_size
                + ((offset % 2) + j // (m - 1)) % block_size
                for j in range(k_ex)
            )
        else:
            outside = [j for j in range(n) if j < lo or j >= lo + block_size]
            picked = rng.choice(len(outside), size=k_ex, replace=False)
            ext = [outside[j] for j in sorted(picked)]
        dependencies.append(tuple(intra + ext))
    return InteractionStructure(n, m, k_ex, pattern, tuple(dependencies))


class Landscape:
    """A fully tabulated NK landscape.

    ``tables[i]`` holds decision i's contribution for every combination of
    (own state, dependency states), keyed by the bits in that order, own
    state most significant.  Dense arrays over all 2**n configurations are
    derived once so evaluation is O(1) and the global optimum is exact.
    """

    def __init__(
        self,
        structure: InteractionStructure,
        tables: np.ndarray,
        seed: tuple[int, ...] | None = None,
    ):
        n, m = structure.n, structure.m
        expected = (n, 1 << (structure.k + 1))
        if tables.shape != expected:
            raise ValueError(
                f"contribution tables have shape {tables.shape}, expected {expected}"
            )
        self.structure = structure
        self.tables = tables
        self.seed = seed

        configs = np.arange(1 << n, dtype=np.int64)
        block_values = np.zeros((m, 1 << n))
        for i, deps in enumerate(structure.dependencies):
            keys = (configs >> i) & 1
            for j in deps:
                keys = (keys << 1) | ((configs >> j) & 1)
            block_values[structure.block_of(i)] += tables[i][keys]
        block_values /= n
        self.block_values = block_values
        self.values = block_values.sum(axis=0)
        self.optimum_index = int(np.argmax(self.values))
        self.v_star = float(self.values[self.optimum_index])

        # plain lists: scalar lookups are the simulation hot path and
        # list indexing beats ndarray scalar indexing by ~2x
        self._value_list = self.values.tolist()
        self._block_lists = [row.tolist() for row in block_values]

    @property
    def n(self) -> int:
        return self.structure.n

    @property
    def m(self) -> int:
        return self.structure.m

    @property
    def optimum_config(self) -> tuple[int, ...]:
        return index_to_config(self.optimum_index, self.n)

    def contribution(self, config: Sequence[int], i: int) -> float:
        """Contribution of decision i under config, via its own table."""
        bits = tuple(config)
        if len(bits) != self.n:
            raise ValueError(f"configuration has {len(bits)} decisions, expected {self.n}")
        if not 0 <= i < self.n:
            raise ValueError(f"decision index {i} out of range for n={self.n}")
        key = bits[i]
        if key not in (0, 1):
            raise ValueError(f"decision {i} must be 0 or 1, got {key!r}")
        for j in self.structure.dependencies[i]:
            bit = bits[j]
            if bit not in (0, 1):
                raise ValueError(f"decision {j} must be 0 or 1, got {bit!r}")
            key = (key << 1) | bit
        return float(self.tables[i][key])

    def evaluate(self, config: Sequence[int]) -> float:
        """Overall performance of a configuration (mean contribution)."""
        return self._value_list[config_to_index(config)]

    def manager_performance(self, config: Sequence[int], block: int) -> float:
        """Block r's share of performance: sum of its contributions over n."""
        if not 0 <= block < self.m:
            raise ValueError(f"block index {block} out of range for m={self.m}")
        return self._block_lists[block][config_to_index(config)]

    def value_at(self, index: int) -> float:
        """evaluate() for an already-packed configuration, no validation."""
        return self._value_list[index]

    def block_value(self, block: int, index: int) -> float:
        """manager_performance() for an already-packed configuration, no validation."""
        return self._block_lists[block][index]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "kEx": self.structure.k_ex,
            "pattern": self.structure.pattern,
            "seed": list(self.seed) if self.seed is not None else None,
            "dependencies": [list(d) for d in self.structure.dependencies],
            "tables": self.tables.tolist(),
            "optimum": {"config": list(self.optimum_config), "value": self.v_star},
        }


def generate_landscape(
    structure: InteractionStructure,
    rng: np.random.Generator,
    seed: tuple[int, ...] | None = None,
) -> Landscape:
    """Draw all contribution tables U[0, 1) and tabulate the landscape."""
    tables = rng.random((structure.n, 1 << (structure.k + 1)))
    return Landscape(structure, tables, seed=seed)


def landscape_from_dict(data: dict) -> Landscape:
    structure = InteractionStructure(
        n=data["n"],
        m=data["m"],
        k_ex=data["kEx"],
        pattern=data["pattern"],
        dependencies=tuple(tuple(d) for d in data["dependencies"]),
    )
    seed = tuple(data["seed"]) if data.get("seed") is not None else None
    return Landscape(structure, np.asarray(data["tables"]), seed=seed)


def dump_landscape(landscape: Landscape, path: str | Path) -> None:
    Path(path).write_text(json.dumps(landscape.to_dict()))


def load_landscape(path: str | Path) -> Landscape:
    return landscape_from_dict(json.loads(Path(path).read_text()))
