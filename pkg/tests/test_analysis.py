import itertools

import numpy as np
import pytest
from conftest import TRIANGLE_LOOPS, modes, networks, signed_graphs
from hypothesis import given, settings
from hypothesis import strategies as st

from signet.analysis import (
    check_parallel_stability,
    check_periodic_stability,
    construct_period2_threshold,
    exists_total_cycle_config,
    flip_sets,
    margins,
    total_two_cycle_condition,
    verify_energy_laws,
)
from signet.constructions import C8_SCHEDULE, unstable_majority_cycle
from signet.dynamics import (
    ThresholdNetwork,
    UpdateMode,
    apply_mode,
    enumerate_attractors,
    orbit,
    parse_config,
)
from signet.errors import PreconditionError
from signet.graph import SignedGraph, cycle_graph, induced_subgraph, parse_graph
from signet.structure import max_subgraph_stability, stability_index

NEG_K2 = parse_graph("nodes 2\nedge 1 2 -1")


def test_flip_sets_c4(c4_unstable):
    fs = flip_sets(ThresholdNetwork(c4_unstable), parse_config("-+-+"), 0)
    assert fs.P_plus == {1, 3} and not (fs.B_plus | fs.B_minus | fs.P_minus)


def test_flip_sets_isolated():
    fs = flip_sets(ThresholdNetwork(SignedGraph.build(1)), np.array([1]), 0)
    assert not (fs.B_plus | fs.B_minus | fs.P_plus | fs.P_minus)


@settings(max_examples=60, deadline=None)
@given(networks(max_n=6), st.data())
def test_flip_set_identity(net, data):
    g, b = net
    T = ThresholdNetwork(g, b)
    x = np.array(data.draw(st.lists(st.sampled_from((-1, 1)), min_size=g.n, max_size=g.n)))
    for i in range(g.n):
        fs = flip_sets(T, x, i)
        off = sum(w * x[j] for j, w in g.neighbors(i))
        assert off == x[i] * fs.alignment
        assert len(fs.B_plus | fs.B_minus | fs.P_plus | fs.P_minus) == g.degree(i)


def test_total_two_cycle_examples(c4_unstable):
    assert total_two_cycle_condition(ThresholdNetwork(NEG_K2), [1, 1], verify=True)
    assert total_two_cycle_condition(ThresholdNetwork(c4_unstable), parse_config("-+-+"), verify=True)
    # all-positive C4 with positive loops still alternates (every margin is 1)
    stable_c4 = ThresholdNetwork(cycle_graph(4, 1, 1))
    hits = [x for x in itertools.product((-1, 1), repeat=4)
            if total_two_cycle_condition(stable_c4, x)]
    assert sorted(hits) == [(-1, 1, -1, 1), (1, -1, 1, -1)]
    stable_c3 = ThresholdNetwork(cycle_graph(3, 1, 1))
    assert not any(total_two_cycle_condition(stable_c3, x)
                   for x in itertools.product((-1, 1), repeat=3))


@settings(max_examples=80, deadline=None)
@given(networks(max_n=5, b_range=(-3, 3)))
def test_margin_condition_iff_total_cycle(net):
    g, b = net
    T = ThresholdNetwork(g, b)
    par = UpdateMode.parallel(g.n)
    for x in itertools.product((-1, 1), repeat=g.n):
        x = np.array(x)
        y = apply_mode(T, x, par)[0]
        sim = np.array_equal(y, -x) and np.array_equal(apply_mode(T, y, par)[0], x)
        assert total_two_cycle_condition(T, x) == sim
        # equivalent closed form: -(w_ii + alignment) >= 1 + |b_i|
        closed = all(
            -(T.W[i, i] + flip_sets(T, x, i).alignment) >= 1 + abs(b[i]) for i in range(g.n))
        assert closed == sim


def test_exists_total_cycle_examples():
    assert exists_total_cycle_config(cycle_graph(8, 1, -1)) is not None
    assert exists_total_cycle_config(cycle_graph(4, 1, 1)).tolist() == [-1, 1, -1, 1]
    assert exists_total_cycle_config(cycle_graph(3, 1, 1)) is None
    assert exists_total_cycle_config(NEG_K2).tolist() == [-1, -1]


def test_construct_negative_k2():
    got = construct_period2_threshold(NEG_K2)
    assert got.thresholds == (0, 0)
    assert got.config.tolist() == [1, 1]
    assert got.flip_set == {0, 1}


def test_construct_c8():
    got = construct_period2_threshold(cycle_graph(8, 1, -1))
    assert got.orbit.period == 2 and got.orbit.transient == 0
    assert got.thresholds == (0,) * 8


def test_construct_single_negative_loop_vertex():
    # positive triangle plus a pendant vertex carrying the only negative loop
    g = SignedGraph.build(4, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1)], {3: -1})
    got = construct_period2_threshold(g)
    assert got is not None and got.orbit.period == 2
    rec = orbit(ThresholdNetwork(g, got.thresholds), got.config, UpdateMode.parallel(4))
    assert rec.period == 2


def test_construct_rejects_negative_stability():
    with pytest.raises(PreconditionError):
        construct_period2_threshold(parse_graph(TRIANGLE_LOOPS))


@settings(max_examples=80, deadline=None)
@given(signed_graphs(max_n=5))
def test_construct_whenever_nonnegative(g):
    if stability_index(g) < 0:
        assert exists_total_cycle_config(g) is None
        return
    got = construct_period2_threshold(g)
    assert got is not None
    T = ThresholdNetwork(g, got.thresholds)
    rec = orbit(T, got.config, UpdateMode.parallel(g.n))
    assert (rec.transient, rec.period) == (0, 2)


def test_single_negative_loop_verdict():
    v = check_parallel_stability(SignedGraph.build(1, loops={0: -1}), [0], validate=True)
    assert not v.sufficient_condition_holds
    assert v.worst_subgraph == (frozenset({0}), 0)
    assert v.observed_periods == (2,) and v.consistent


def test_edgeless_graph_only_fixed_points():
    v = check_parallel_stability(SignedGraph.build(4), [1, -1, 0, 2], validate=True)
    assert v.sufficient_condition_holds and v.validated_by_enumeration


def test_triangle_loops_all_thresholds():
    g = parse_graph(TRIANGLE_LOOPS)
    for b in itertools.product(range(-2, 3), repeat=3):
        v = check_parallel_stability(g, b, validate=True)
        assert v.consistent


def test_c8_periodic_condition_fails():
    T = unstable_majority_cycle(8)
    v = check_periodic_stability(T, UpdateMode(C8_SCHEDULE), validate=True)
    assert not v.sufficient_condition_holds
    assert 5 in v.observed_periods and v.consistent
    block_values = dict((vs, s) for vs, s in v.block_worst)
    assert block_values[frozenset({0, 1, 6, 7})] >= 0


def test_sequential_without_negative_loops():
    g = SignedGraph.build(4, [(0, 1, -1), (1, 2, 1), (2, 3, -1), (0, 3, -1)], {1: 1})
    for b in itertools.product(range(-1, 2), repeat=4):
        T = ThresholdNetwork(g, b)
        v = check_periodic_stability(T, UpdateMode.sequential([2, 0, 3, 1]), validate=True)
        assert v.sufficient_condition_holds and v.validated_by_enumeration


@settings(max_examples=60, deadline=None)
@given(networks(max_n=4), st.data())
def test_periodic_verdict_consistent(net, data):
    g, b = net
    mode = UpdateMode(data.draw(modes(g.n)))
    assert check_periodic_stability(ThresholdNetwork(g, b), mode, validate=True).consistent


def test_energy_laws_c4(c4_unstable):
    T = ThresholdNetwork(c4_unstable)
    rec = orbit(T, parse_config("-+-+"), UpdateMode.parallel(4))
    report = verify_energy_laws(T, rec.trajectory + [rec.cycle[0]], attractor_start=0)
    assert report.ok
    assert all(s.dl2 == 0 and s.bound_total == 32 for s in report.steps)


@settings(max_examples=60, deadline=None)
@given(networks(max_n=5), st.data())
def test_energy_laws_on_orbits(net, data):
    g, b = net
    T = ThresholdNetwork(g, b)
    x = np.array(data.draw(st.lists(st.sampled_from((-1, 1)), min_size=g.n, max_size=g.n)))
    rec = orbit(T, x, UpdateMode.parallel(g.n))
    report = verify_energy_laws(T, rec.trajectory + [rec.cycle[0]], rec.transient)
    assert report.ok, report.violations


def test_margins_fixed_point_nonpositive():
    g = SignedGraph.build(3, [(0, 1, 1), (1, 2, -1)], {0: 1})
    T = ThresholdNetwork(g, (0, 1, -1))
    land = enumerate_attractors(T, UpdateMode.parallel(3))
    for a in land.attractors:
        if a.period == 1:
            assert np.all(margins(T, a.cycle[0]) <= 0)


def test_max_subgraph_uses_induced_sets():
    g = cycle_graph(8, 1, -1)
    value, vs = max_subgraph_stability(induced_subgraph(g, [0, 1, 6, 7])[0])
    assert value == 6
