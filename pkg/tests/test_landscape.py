"""Landscape construction, evaluation, and serialization."""

import math

import numpy as np
import pytest
from numpy.random import default_rng

from orgsearch.landscape import (
    InteractionStructure,
    Landscape,
    build_structure,
    config_to_index,
    dump_landscape,
    generate_landscape,
    index_to_config,
    landscape_from_dict,
    load_landscape,
)


def make_landscape(k_ex=0, pattern="cyclic", seed=7, n=12, m=4):
    rng = default_rng(seed)
    structure = build_structure(n, m, k_ex, pattern, rng)
    return generate_landscape(structure, rng, seed=(seed,))


def test_config_index_round_trip():
    for index in range(1 << 6):
        config = index_to_config(index, 6)
        assert config_to_index(config) == index


def test_config_to_index_rejects_non_bits():
    with pytest.raises(ValueError):
        config_to_index((0, 2, 1))


def test_index_to_config_rejects_out_of_range():
    with pytest.raises(ValueError):
        index_to_config(1 << 12, 12)


def test_structure_blocks_are_contiguous_and_exclusive():
    structure = build_structure(12, 4, 0, "cyclic")
    assert structure.block_size == 3
    assert structure.block_range(2) == (6, 9)
    for i, deps in enumerate(structure.dependencies):
        assert i not in deps
        assert len(deps) == len(set(deps))


def test_cyclic_k0_couples_only_within_block():
    structure = build_structure(12, 4, 0, "cyclic")
    assert structure.k == 2
    for i, deps in enumerate(structure.dependencies):
        block = i // 3
        assert sorted(deps) == [j for j in range(3 * block, 3 * block + 3) if j != i]


def test_cyclic_externals_follow_the_block():
    """With k_ex=5 every decision adds the five indices right after its
    block, wrapping around the end."""
    structure = build_structure(12, 4, 5, "cyclic")
    assert structure.k == 7
    for i, deps in enumerate(structure.dependencies):
        lo = (i // 3) * 3
        expected = [(lo + 3 + j) % 12 for j in range(5)]
        assert list(deps[2:]) == expected


def test_single_decision_blocks_have_no_intra_dependencies():
    structure = build_structure(3, 3, 0, "cyclic")
    assert structure.k == 0
    assert all(deps == () for deps in structure.dependencies)


def test_distributed_externals_touch_every_other_block():
    structure = build_structure(12, 4, 3, "distributed")
    for i, deps in enumerate(structure.dependencies):
        ext = deps[2:]
        assert len(ext) == 3
        own = i // 3
        assert sorted(j // 3 for j in ext) == sorted(r for r in range(4) if r != own)


def test_distributed_externals_differ_by_position_parity():
    structure = build_structure(12, 4, 3, "distributed")
    d = structure.dependencies
    assert d[0][2:] == d[2][2:], "first and third block members share externals"
    assert d[0][2:] != d[1][2:], "the middle block member reads one row deeper"


def test_distributed_is_deterministic_and_ignores_rng():
    a = build_structure(12, 4, 4, "distributed")
    b = build_structure(12, 4, 4, "distributed", default_rng(123))
    assert a == b


def test_random_externals_stay_outside_block_and_depend_on_seed():
    one = build_structure(12, 4, 3, "random", default_rng(5))
    two = build_structure(12, 4, 3, "random", default_rng(5))
    other = build_structure(12, 4, 3, "random", default_rng(6))
    assert one == two
    assert one != other
    for i, deps in enumerate(one.dependencies):
        lo = (i // 3) * 3
        for j in deps[2:]:
            assert j < lo or j >= lo + 3


def test_random_requires_rng():
    with pytest.raises(ValueError):
        build_structure(12, 4, 1, "random")


def test_build_structure_validation():
    with pytest.raises(ValueError):
        build_structure(12, 5, 0)
    with pytest.raises(ValueError):
        build_structure(12, 4, 10)
    with pytest.raises(ValueError):
        build_structure(12, 4, 0, "diagonal")


def test_values_are_means_of_contributions():
    landscape = make_landscape(k_ex=2, pattern="distributed")
    rng = default_rng(0)
    for _ in range(25):
        config = tuple(int(b) for b in rng.integers(0, 2, size=12))
        expected = sum(landscape.contribution(config, i) for i in range(12)) / 12
        assert landscape.evaluate(config) == pytest.approx(expected, abs=1e-12)


def test_block_values_sum_to_overall_performance():
    landscape = make_landscape(k_ex=3, pattern="distributed")
    rng = default_rng(1)
    for _ in range(25):
        config = tuple(int(b) for b in rng.integers(0, 2, size=12))
        total = sum(landscape.manager_performance(config, r) for r in range(4))
        assert total == pytest.approx(landscape.evaluate(config), abs=1e-12)


def test_fast_lookups_match_validated_paths():
    landscape = make_landscape(k_ex=1)
    for index in range(0, 1 << 12, 97):
        config = index_to_config(index, 12)
        assert landscape.value_at(index) == landscape.evaluate(config)
        for r in range(4):
            assert landscape.block_value(r, index) == landscape.manager_performance(config, r)


def test_optimum_is_the_argmax():
    landscape = make_landscape(k_ex=2)
    values = [landscape.value_at(i) for i in range(1 << 12)]
    assert landscape.v_star == max(values)
    assert values[landscape.optimum_index] == landscape.v_star


def test_tables_shape_is_validated():
    structure = build_structure(12, 4, 0, "cyclic")
    with pytest.raises(ValueError):
        Landscape(structure, np.zeros((12, 4)))


def test_contribution_validates_inputs():
    landscape = make_landscape()
    good = (0,) * 12
    with pytest.raises(ValueError):
        landscape.contribution(good[:11], 0)
    with pytest.raises(ValueError):
        landscape.contribution(good, 12)
    with pytest.raises(ValueError):
        landscape.contribution((2,) + good[1:], 0)


def test_dump_load_round_trip_is_bit_exact(tmp_path):
    landscape = make_landscape(k_ex=3, pattern="distributed", seed=42)
    path = tmp_path / "landscape.json"
    dump_landscape(landscape, path)
    loaded = load_landscape(path)
    assert loaded.structure == landscape.structure
    assert loaded.seed == landscape.seed
    assert np.array_equal(loaded.tables, landscape.tables)
    assert loaded.v_star == landscape.v_star
    assert loaded.optimum_index == landscape.optimum_index


def test_landscape_from_dict_preserves_values():
    landscape = make_landscape(k_ex=1, seed=9)
    clone = landscape_from_dict(landscape.to_dict())
    assert np.array_equal(clone.values, landscape.values)
    assert np.array_equal(clone.block_values, landscape.block_values)


def test_interaction_structure_block_range_validation():
    structure = build_structure(12, 4, 0)
    with pytest.raises(ValueError):
        structure.block_range(4)


def test_generated_tables_are_uniform_unit_interval():
    landscape = make_landscape(k_ex=5, seed=11)
    assert landscape.tables.min() >= 0.0
    assert landscape.tables.max() < 1.0
    assert landscape.tables.shape == (12, 256)
    assert math.isclose(landscape.tables.mean(), 0.5, abs_tol=0.03)
