"""Recompute the small worked examples through the command line interface.

    python3 scripts/worked_examples.py
"""

import tempfile
from pathlib import Path

from signet.cli import main

GRAPHS = {
    "triangle_loops": "nodes 3\nedge 1 2 +1\nedge 1 3 +1\nedge 2 3 +1\nloop 1 +1\nloop 2 -1\n",
    "square_chord": ("nodes 4\nedge 1 2 +1\nedge 1 3 -1\nedge 2 3 +1\nedge 3 4 +1\nedge 1 4 +1\n"
                     "loop 3 +1\n"),
    "square_chord_flipped": ("nodes 4\nedge 1 2 +1\nedge 1 3 +1\nedge 2 3 -1\nedge 3 4 +1\n"
                             "edge 1 4 +1\nloop 3 +1\n"),
    "c4_negative_edge": "nodes 4\nedge 1 2 +1\nedge 2 3 +1\nedge 3 4 +1\nedge 1 4 -1\n",
    "c4_positive": "nodes 4\nedge 1 2 +1\nedge 2 3 +1\nedge 3 4 +1\nedge 1 4 +1\n",
    "c3_negative_edge": "nodes 3\nedge 1 2 +1\nedge 2 3 +1\nedge 1 3 -1\n",
    "c3_positive": "nodes 3\nedge 1 2 +1\nedge 2 3 +1\nedge 1 3 +1\n",
    "c4_unstable": ("nodes 4\nedge 1 2 +1\nedge 2 3 +1\nedge 3 4 +1\nedge 1 4 +1\n"
                    + "".join(f"loop {i} -1\n" for i in range(1, 5))),
}


def run(*argv):
    print("$ signet", " ".join(argv))
    main(list(argv))
    print()


def main_():
    with tempfile.TemporaryDirectory() as tmp:
        paths = {}
        for name, text in GRAPHS.items():
            paths[name] = str(Path(tmp) / f"{name}.graph")
            Path(paths[name]).write_text(text)
        for name in ("triangle_loops", "square_chord", "square_chord_flipped", "c4_negative_edge",
                     "c4_positive", "c3_negative_edge", "c3_positive"):
            run("analyze", paths[name])
        c4 = paths["c4_unstable"]
        run("simulate", c4, "--mode", "parallel", "--init", "-+-+")
        run("simulate", c4, "--mode", "seq:1,2,4,3", "--init", "-+-+", "--substeps")
        run("attractors", c4, "--mode", "parallel")
        run("check", c4, "--mode", "parallel")
        run("construct", "cycle", "--n", "8")
        run("construct", "superpoly", "--m", "13")


if __name__ == "__main__":
    main_()
