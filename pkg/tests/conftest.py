import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from signet.graph import SignedGraph, parse_graph_file  # noqa: E402


@st.composite
def signed_graphs(draw, min_n=1, max_n=6, loops=True):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    edges = [(u, v, draw(st.sampled_from((-1, 1)))) for u, v in chosen]
    loop_map = {}
    if loops:
        for i in range(n):
            s = draw(st.sampled_from((0, 1, -1)))
            if s:
                loop_map[i] = s
    return SignedGraph.build(n, edges, loop_map)


@st.composite
def networks(draw, min_n=1, max_n=6, b_range=(-2, 2)):
    g = draw(signed_graphs(min_n, max_n))
    b = tuple(draw(st.integers(*b_range)) for _ in range(g.n))
    return g, b


@st.composite
def modes(draw, n, max_len=5):
    blocks = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1), min_size=1,
                           max_size=max_len))
    return tuple(tuple(sorted(b)) for b in blocks)


TRIANGLE_LOOPS = "nodes 3\nedge 1 2 +1\nedge 1 3 +1\nedge 2 3 +1\nloop 1 +1\nloop 2 -1\n"
SQUARE_CHORD = ("nodes 4\nedge 1 2 +1\nedge 1 3 -1\nedge 2 3 +1\nedge 3 4 +1\nedge 1 4 +1\n"
               "loop 3 +1\n")
SQUARE_CHORD_FLIPPED = ("nodes 4\nedge 1 2 +1\nedge 1 3 +1\nedge 2 3 -1\nedge 3 4 +1\nedge 1 4 +1\n"
              "loop 3 +1\n")
FRUSTRATION_EXAMPLES = (
    ("nodes 4\nedge 1 2 +1\nedge 2 3 +1\nedge 3 4 +1\nedge 1 4 -1\n", False),
    ("nodes 4\nedge 1 2 +1\nedge 2 3 +1\nedge 3 4 +1\nedge 1 4 +1\n", True),
    ("nodes 3\nedge 1 2 +1\nedge 2 3 +1\nedge 1 3 -1\n", True),
    ("nodes 3\nedge 1 2 +1\nedge 2 3 +1\nedge 1 3 +1\n", False),
)
C4_UNSTABLE = "nodes 4\nedge 1 2 +1\nedge 2 3 +1\nedge 3 4 +1\nedge 1 4 +1\n" + "".join(
    f"loop {i} -1\n" for i in range(1, 5))


@pytest.fixture
def c4_unstable():
    return parse_graph_file(C4_UNSTABLE)[0]


@pytest.fixture
def graph_file(tmp_path):
    def write(text, name="g.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
