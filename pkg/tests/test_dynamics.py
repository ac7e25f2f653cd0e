import itertools

import numpy as np
import pytest
from conftest import modes, networks
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import brute_attractors, step, weight_lists

from signet.constructions import C8_SCHEDULE, unstable_majority_cycle
from signet.dynamics import (
    ThresholdNetwork,
    UpdateMode,
    apply_mode,
    apply_set,
    config_code,
    config_from_code,
    energy2,
    energy_delta,
    enumerate_attractors,
    flip_margin,
    format_config,
    local_field,
    local_update,
    orbit,
    parse_config,
    parse_mode,
    with_tie_loops,
)
from signet.errors import BudgetError, GuardError, ParseError
from signet.graph import SignedGraph, parse_graph, path_graph

ALT = parse_config("-+-+")


@pytest.fixture
def T4(c4_unstable):
    return ThresholdNetwork(c4_unstable)


@pytest.fixture
def T8():
    return unstable_majority_cycle(8)


def test_local_field_and_update(T4):
    assert local_field(T4, ALT, 0) == 3
    assert local_update(T4, ALT, 0) == 1
    assert all(flip_margin(T4, ALT, i) == 3 for i in range(4))


def test_tie_keeps_state():
    T = ThresholdNetwork(path_graph(3))
    for x1 in (-1, 1):
        x = np.array([1, x1, -1])
        assert local_field(T, x, 1) == 0
        assert local_update(T, x, 1) == x1
        assert flip_margin(T, x, 1) == 0


def test_isolated_vertex_field_zero():
    T = ThresholdNetwork(SignedGraph.build(1))
    assert local_field(T, [1], 0) == 0


def test_c4_parallel(T4):
    rec = orbit(T4, ALT, UpdateMode.parallel(4))
    assert (rec.transient, rec.period, rec.classification) == (0, 2, "total_two_cycle")
    assert rec.cycle_strings() == ["-+-+", "+-+-"]


def test_c4_sequential_substeps(T4):
    mode = parse_mode("seq:1,2,4,3", 4)
    _, subs = apply_mode(T4, ALT, mode, trace=True)
    assert [format_config(s) for s in subs] == ["++-+", "+--+", "+---", "+---"]
    rec = orbit(T4, ALT, mode)
    assert rec.cycle_strings() == ["----"] and rec.transient == 2


def test_c8_substep_and_step(T8):
    x = parse_config("-+----+-")
    assert format_config(apply_set(T8, x, (2, 4))) == "-++-" + "--+-"
    y, _ = apply_mode(T8, x, UpdateMode(C8_SCHEDULE))
    assert format_config(y) == "-+++--+-"
    rec = orbit(T8, x, UpdateMode(C8_SCHEDULE))
    assert (rec.transient, rec.period, rec.classification) == (0, 5, "long_cycle")


def test_parallel_block_equals_apply_set(T8):
    x = parse_config("-+-++-+-")
    assert np.array_equal(apply_set(T8, x, range(8)), apply_mode(T8, x, UpdateMode.parallel(8))[0])


def test_energy_examples(T4):
    assert energy2(T4, ALT) == 12
    assert energy2(T4, np.ones(4)) == -4
    dl2, d2, flips = energy_delta(T4, ALT, -ALT)
    assert list(d2) == [-12] * 4 and flips == frozenset(range(4))
    assert energy_delta(T4, ALT, ALT)[0] == 0 and not energy_delta(T4, ALT, ALT)[2]


def test_budget_error_keeps_trajectory(T4):
    with pytest.raises(BudgetError) as info:
        orbit(T4, ALT, UpdateMode.parallel(4), max_steps=1)
    assert [format_config(x) for x in info.value.trajectory] == ["-+-+", "+-+-"]


@pytest.mark.parametrize("text", ["parallel", "seq:1,2,4,3", "{3,5};{1,2,7,8};{4,6};{1,2,7,8}"])
def test_mode_round_trip(text):
    n = 8 if "{" in text else 4
    assert parse_mode(text, n).to_string(n) == text


@pytest.mark.parametrize("text", ["seq:1,9", "{}", "{1,2", "seq:a", ""])
def test_bad_modes(text):
    with pytest.raises(ParseError):
        parse_mode(text, 4)


def test_mode_size_and_length():
    mode = UpdateMode(C8_SCHEDULE)
    assert (mode.length, mode.size) == (4, 4)


def test_config_strings():
    assert list(parse_config("all:+", 3)) == [1, 1, 1]
    with pytest.raises(ParseError):
        parse_config("+-x")
    with pytest.raises(ParseError):
        parse_config("+-", 3)


def test_tie_loop_encoding():
    g = path_graph(3)
    assert with_tie_loops(g, "unstable").loops == ((0, -1), (1, -1), (2, -1))
    T = ThresholdNetwork(with_tie_loops(g, "unstable"))
    assert local_update(T, np.array([1, 1, -1]), 1) == -1
    T = ThresholdNetwork(with_tie_loops(g, "stable"))
    assert local_update(T, np.array([1, 1, -1]), 1) == 1


def test_small_landscapes():
    land = enumerate_attractors(ThresholdNetwork(parse_graph("nodes 2\nedge 1 2 -1")),
                                UpdateMode.parallel(2))
    assert any(a.period == 2 and {format_config(c) for c in a.cycle} == {"++", "--"}
               for a in land.attractors)
    single = enumerate_attractors(ThresholdNetwork(SignedGraph.build(1)), UpdateMode.parallel(1))
    assert single.histogram == {1: 2}


def test_c4_landscape(T4):
    land = enumerate_attractors(T4, UpdateMode.parallel(4))
    assert land.histogram == {1: 2, 2: 3}
    assert land.basin_by_period == {1: 2, 2: 14}


def test_enumeration_guard(T4):
    with pytest.raises(GuardError):
        enumerate_attractors(T4, UpdateMode.parallel(4), max_n=3)


def test_workers_do_not_change_result(T8):
    mode = UpdateMode(C8_SCHEDULE)
    a = enumerate_attractors(T8, mode)
    b = enumerate_attractors(T8, mode, workers=3)
    assert np.array_equal(a.successor, b.successor)
    assert [(x.representative, x.basin) for x in a.attractors] == \
        [(x.representative, x.basin) for x in b.attractors]


@given(st.integers(1, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2**n - 1))))
def test_code_round_trip(nc):
    n, code = nc
    x = config_from_code(code, n)
    assert config_code(x) == code
    assert parse_config(format_config(x)).tolist() == x.tolist()


def test_code_order_is_lexicographic():
    strings = [format_config(config_from_code(c, 4)) for c in range(16)]
    keyed = sorted(strings, key=lambda s: [0 if ch == "-" else 1 for ch in s])
    assert strings == keyed


@settings(max_examples=60, deadline=None)
@given(networks(max_n=5), st.data())
def test_landscape_matches_brute_force(net, data):
    g, b = net
    blocks = data.draw(modes(g.n, max_len=4))
    T = ThresholdNetwork(g, b)
    land = enumerate_attractors(T, UpdateMode(blocks))
    w = weight_lists(g.n, g.edges, g.loop_map)
    oracle = brute_attractors(w, b, blocks)
    got = {frozenset(tuple(int(v) for v in c) for c in a.cycle): a.basin for a in land.attractors}
    assert got == oracle
    assert sum(a.basin for a in land.attractors) == 2 ** g.n
    for a in land.attractors:
        assert a.representative == min(config_code(c) for c in a.cycle)


@settings(max_examples=80, deadline=None)
@given(networks(max_n=7), st.data())
def test_orbit_record_invariants(net, data):
    g, b = net
    blocks = data.draw(modes(g.n))
    x0 = np.array(data.draw(st.lists(st.sampled_from((-1, 1)), min_size=g.n, max_size=g.n)))
    T = ThresholdNetwork(g, b)
    mode = UpdateMode(blocks)
    rec = orbit(T, x0, mode)
    w = weight_lists(g.n, g.edges, g.loop_map)
    p = rec.period
    for i, c in enumerate(rec.cycle):
        assert step(w, b, tuple(c), blocks) == tuple(rec.cycle[(i + 1) % p])
    assert len({c.tobytes() for c in rec.cycle}) == p
    if rec.classification == "total_two_cycle":
        assert p == 2 and np.array_equal(rec.cycle[1], -rec.cycle[0])
    assert rec.classification != "two_cycle" or p == 2
    again = orbit(T, x0, mode)
    assert again.summary() == rec.summary()


@settings(max_examples=80, deadline=None)
@given(networks(max_n=6), st.data())
def test_energy_identity(net, data):
    g, b = net
    T = ThresholdNetwork(g, b)
    x = np.array(data.draw(st.lists(st.sampled_from((-1, 1)), min_size=g.n, max_size=g.n)))
    y, _ = apply_mode(T, x, UpdateMode.parallel(g.n))
    dl2, d2, flips = energy_delta(T, x, y)
    d = (y - x).astype(np.int64)
    assert dl2 == int(d2.sum() - d @ T.W @ d)
    assert all(d2[i] <= -4 for i in flips)


@settings(max_examples=60, deadline=None)
@given(networks(max_n=6, b_range=(0, 0)))
def test_negation_symmetry_without_ties(net):
    g, _ = net
    T = ThresholdNetwork(g)
    par = UpdateMode.parallel(g.n)
    for x in itertools.product((-1, 1), repeat=g.n):
        x = np.array(x)
        if any(local_field(T, x, i) == 0 for i in range(g.n)):
            continue
        assert np.array_equal(apply_mode(T, -x, par)[0], -apply_mode(T, x, par)[0])
        assert energy2(T, x) == energy2(T, -x)
