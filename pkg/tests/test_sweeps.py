import numpy as np
from conftest import modes, networks
from hypothesis import given, settings
from hypothesis import strategies as st

from signet import sweeps
from signet.dynamics import ThresholdNetwork, UpdateMode, enumerate_attractors
from signet.graph import induced_subgraph
from signet.structure import max_subgraph_stability, stability_index


def test_topology_counts():
    # connected unlabeled graphs on 1..5 vertices: 1, 1, 2, 6, 21
    counts = [len(sweeps.connected_topologies(k, k)) for k in range(1, 6)]
    assert counts == [1, 1, 2, 6, 21]


def test_family_size_n_le_3():
    fam = sweeps.family_arrays(sweeps.connected_topologies(1, 3))
    sizes = {n: len(ws) for n, (_, ws) in fam.items()}
    # n=1: 3 loop patterns; n=2: 2*9; n=3: path 4*27 + triangle 8*27
    assert sizes == {1: 3, 2: 18, 3: 324}


@settings(max_examples=60, deadline=None)
@given(networks(max_n=5), st.data())
def test_kernel_successors_match_engine(net, data):
    g, b = net
    blocks = data.draw(modes(g.n, max_len=4))
    masks = np.zeros((len(blocks), g.n), dtype=np.bool_)
    for k, s in enumerate(blocks):
        masks[k, list(s)] = True
    W = g.matrix().astype(np.int64)
    succ = sweeps._successors(W, np.array(b, dtype=np.int64), masks)
    land = enumerate_attractors(ThresholdNetwork(g, b), UpdateMode(blocks))
    assert np.array_equal(succ, land.successor)
    assert sweeps._max_period(succ) == max(land.periods)


@settings(max_examples=40, deadline=None)
@given(networks(max_n=5))
def test_subset_stability_matches_library(net):
    g, _ = net
    W = g.matrix().astype(np.int64)
    sub = sweeps.subset_stability(W)
    within = sweeps.worst_within(sub)
    for mask in range(1, 1 << g.n):
        vs = [i for i in range(g.n) if mask >> i & 1]
        h = induced_subgraph(g, vs)[0]
        assert sub[mask] == stability_index(h)
        assert within[mask] == max_subgraph_stability(h)[0]


def test_small_suites_pass():
    for r in (sweeps.parallel_stability_sweep(3), sweeps.periodic_stability_sweep(3, modes=50),
              sweeps.total_cycle_sweep(3), sweeps.zero_threshold_sweep(3),
              *sweeps.period2_sweep(sweeps.connected_topologies(1, 3)),
              sweeps.energy_sweep(sweeps.connected_topologies(1, 3))):
        assert r.ok, r.line()
        assert r.checked > 0


def test_random_mode_shape():
    rng = np.random.default_rng(5)
    for _ in range(100):
        steps = sweeps.random_mode(rng, 4, 6)
        assert 1 <= len(steps) <= 6
        assert all(s and set(s) <= set(range(4)) for s in steps)


def test_psd_generator_is_psd():
    rng = np.random.default_rng(2)
    for _ in range(50):
        W, _ = sweeps.random_psd_network(rng, int(rng.integers(1, 9)))
        assert np.linalg.eigvalsh(W).min() > -1e-9
        assert sweeps.psd_on_cube(W)


def test_rho_corpus_size():
    assert len(sweeps.rho_oracle_corpus()) >= 500
