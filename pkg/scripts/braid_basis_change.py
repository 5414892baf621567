"""Search braids relating facial bases of grid(2,2) for random tree and base choices.

Each trial draws a spanning tree and one base vertex per face, rewrites the
resulting facial lassos in the reference basis and looks for a braid sending
the reference letters to them.  Prints the histogram of braid lengths.
"""

import argparse
import collections
import random

from planar_ym import braid as br
from planar_ym import graph as gr
from planar_ym import loops as lp
from planar_ym import suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=30)
    ap.add_argument("--max-len", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    g = gr.build_grid(2, 2)
    TA = gr.grid_comb_tree(g)
    basesA = [lp.default_base(g, f) for f in range(4)]
    trees = gr.all_spanning_trees(g)
    hist = collections.Counter()
    for _ in range(args.trials):
        TB = rng.choice(trees).rerooted(TA.root)
        basesB = [rng.choice(g.boundary_vertices(f)) for f in g.bounded_faces]
        targets, _, _ = suite.facial_targets(g, TA, basesA, TB, basesB)
        beta = br.find_braid(targets, args.max_len)
        hist[len(beta) if beta is not None else None] += 1
    for length in sorted(hist, key=lambda x: (x is None, x)):
        label = "not found" if length is None else f"length {length}"
        print(f"{label:>12}: {hist[length]}")


if __name__ == "__main__":
    main()
