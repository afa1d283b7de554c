"""Manager state, perception, per-period randomness, and the period protocol."""

import pytest
from numpy.random import default_rng

from orgsearch.landscape import build_structure, generate_landscape
from orgsearch.organization import (
    ADDITIVE,
    FROZEN,
    PERCEIVED,
    REALIZED,
    RELATIVE,
    ManagerState,
    ManagerStreams,
    Organization,
    perceive,
    step_period,
)
from orgsearch.strategies import Satisficing, strategy_from_name


def make_landscape(seed=21, k_ex=0, pattern="cyclic"):
    rng = default_rng(seed)
    structure = build_structure(12, 4, k_ex, pattern, rng)
    return generate_landscape(structure, rng)


def test_manager_state_validation():
    with pytest.raises(ValueError):
        ManagerState(index=0, lo=0, n_bits=0)
    with pytest.raises(ValueError):
        ManagerState(index=0, lo=0, n_bits=3, max_search=8)
    with pytest.raises(ValueError):
        ManagerState(index=0, lo=0, n_bits=3, alpha=1.5)
    with pytest.raises(ValueError):
        ManagerState(index=0, lo=0, n_bits=3, sigma=-0.1)
    with pytest.raises(ValueError):
        ManagerState(index=0, lo=0, n_bits=3, noise_mode="loud")


def test_perceive_additive_and_relative_arithmetic():
    landscape = make_landscape()
    actual = landscape.block_value(1, 0b101 << 3)
    base = dict(index=1, lo=3, n_bits=3, sigma=0.1, error_table=[0.0] * 8)
    additive = ManagerState(noise_mode=ADDITIVE, **base)
    relative = ManagerState(noise_mode=RELATIVE, **base)
    additive.error_table[0b101] = 2.0
    relative.error_table[0b101] = 2.0
    rng = default_rng(0)
    assert perceive(additive, landscape, 0b101, 0, rng) == pytest.approx(actual + 0.2)
    assert perceive(relative, landscape, 0b101, 0, rng) == pytest.approx(actual * 1.2)


def test_perceive_without_table_draws_fresh_noise():
    landscape = make_landscape()
    manager = ManagerState(index=0, lo=0, n_bits=3, sigma=0.05, noise_mode=RELATIVE)
    one = perceive(manager, landscape, 3, 0, default_rng(1))
    two = perceive(manager, landscape, 3, 0, default_rng(1))
    three = perceive(manager, landscape, 3, 0, default_rng(2))
    assert one == two
    assert one != three


def test_perceive_with_sigma_zero_is_exact():
    landscape = make_landscape()
    manager = ManagerState(index=2, lo=6, n_bits=3)
    for candidate in range(8):
        value = perceive(manager, landscape, candidate, 0, default_rng(3))
        assert value == landscape.block_value(2, candidate << 6)


def test_manager_streams_rewind_per_period():
    streams = ManagerStreams((11, 2, 0, 0), 4)
    first = streams.for_period(1, 7).random(5)
    streams.for_period(1, 3).random(17)
    again = streams.for_period(1, 7).random(5)
    assert list(first) == list(again), "a period lane always replays the same draws"


def test_manager_streams_differ_across_managers_and_periods():
    streams = ManagerStreams((11, 2, 0, 0), 4)
    a = streams.for_period(0, 1).random()
    b = streams.for_period(1, 1).random()
    c = streams.for_period(0, 2).random()
    assert a != b
    assert a != c


def test_organization_create_places_managers_on_blocks():
    landscape = make_landscape()
    config = 0b011_101_000_110
    org = Organization.create(landscape, config, a0=0.1, s_max0=3,
                              sigma=0.05, noise_mode=RELATIVE)
    assert [mgr.lo for mgr in org.managers] == [0, 3, 6, 9]
    for r, manager in enumerate(org.managers):
        assert manager.aspiration == 0.1
        assert manager.max_search == 3
        assert manager.last_own_performance == landscape.block_value(r, config)
        assert manager.status_quo_performance() == manager.last_own_performance


def fresh_org(landscape, config=0b010_001_100_011, **kwargs):
    return Organization.create(landscape, config, **kwargs)


def test_step_period_searches_against_the_frozen_configuration():
    """Every manager's remembered status quo in the audit must price the
    frozen configuration, not intermediate proposals."""
    landscape = make_landscape()
    org = fresh_org(landscape)
    frozen = org.config
    strategies = [Satisficing()] * 4
    streams = ManagerStreams((5, 1), 4)
    audit = []
    step_period(org, landscape, strategies, streams, audit=audit)
    assert [rec["manager"] for rec in audit] == [0, 1, 2, 3]
    for r, rec in enumerate(audit):
        assert rec["status_quo_performance"] == landscape.block_value(r, frozen)
        assert rec["period"] == 1


def test_step_period_composes_all_chosen_blocks():
    landscape = make_landscape()
    org = fresh_org(landscape)
    frozen = org.config
    strategies = [Satisficing()] * 4
    streams = ManagerStreams((5, 2), 4)
    outcome = step_period(org, landscape, strategies, streams)
    for r, chosen in enumerate(outcome.chosen):
        lo = 3 * r
        block = (outcome.config >> lo) & 7
        if chosen is None:
            assert block == (frozen >> lo) & 7
        else:
            assert block == chosen
    assert outcome.altered == (outcome.config != frozen)
    assert outcome.v == landscape.value_at(outcome.config)
    assert org.config == outcome.config
    assert org.period == 1


def test_step_period_realized_deltas_and_memory():
    landscape = make_landscape()
    org = fresh_org(landscape)
    frozen = org.config
    before = [mgr.last_own_performance for mgr in org.managers]
    strategies = [Satisficing()] * 4
    streams = ManagerStreams((5, 3), 4)
    outcome = step_period(org, landscape, strategies, streams)
    for r, manager in enumerate(org.managers):
        own = landscape.block_value(r, outcome.config)
        assert outcome.realized_delta[r] == pytest.approx(own - before[r], abs=1e-15)
        assert manager.last_own_performance == own
    assert before == [landscape.block_value(r, frozen) for r in range(4)]


def test_step_period_is_order_invariant():
    landscape = make_landscape(k_ex=3, pattern="distributed")
    strategies = [strategy_from_name("satisficing") for _ in range(4)]

    def advance(order):
        org = fresh_org(landscape, sigma=0.05, noise_mode=RELATIVE)
        streams = ManagerStreams((9, 4), 4)
        for r, manager in enumerate(org.managers):
            manager.error_table = streams.for_period(r, 0).standard_normal(8).tolist()
        results = []
        for _ in range(20):
            outcome = step_period(org, landscape, strategies, streams,
                                  manager_order=order)
            results.append((outcome.config, tuple(outcome.aspiration),
                            tuple(outcome.max_search)))
        return results

    assert advance(None) == advance([3, 1, 0, 2])


def test_step_period_aspiration_feedback_modes():
    landscape = make_landscape()
    streams_seed = (7, 7)

    def one_period(mode):
        org = fresh_org(landscape)
        strategies = [Satisficing()] * 4
        streams = ManagerStreams(streams_seed, 4)
        outcome = step_period(org, landscape, strategies, streams,
                              aspiration_delta=mode)
        return org, outcome

    org_r, out_r = one_period(REALIZED)
    for r, manager in enumerate(org_r.managers):
        assert manager.aspiration == pytest.approx(0.5 * out_r.realized_delta[r])

    org_p, out_p = one_period(PERCEIVED)
    for r, manager in enumerate(org_p.managers):
        moved = out_p.chosen[r] is not None
        if moved:
            assert manager.aspiration != 0.0 or out_p.realized_delta[r] == 0.0
        else:
            assert manager.aspiration == 0.0


def test_step_period_updates_search_caps_per_rule():
    landscape = make_landscape()
    org = fresh_org(landscape)
    strategies = [Satisficing()] * 4
    streams = ManagerStreams((8, 8), 4)
    outcome = step_period(org, landscape, strategies, streams,
                          space_update_rule="text")
    for r, manager in enumerate(org.managers):
        if outcome.satisfied[r]:
            assert manager.max_search == 2
        else:
            assert manager.max_search == 3
        assert outcome.max_search[r] == manager.max_search


def test_frozen_noise_constant_is_exported():
    assert FROZEN == "frozen"
