"""Compare the lasso and density constructions on small grids.

Prints one row per (grid, group, loop family) with the total variation
between the two exact laws and the time spent.
"""

import argparse
import time

from planar_ym import graph as gr
from planar_ym import groups as gp
from planar_ym import levy as lv
from planar_ym import loops as lp
from planar_ym import yangmills as ym


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rate", type=float, default=0.7, help="jump rate on every non-identity element")
    ap.add_argument("--groups", default="Z2,Z3,S3")
    args = ap.parse_args()

    print("grid  group  loops     tv          seconds")
    for w, h in [(1, 1), (2, 1), (2, 2)]:
        g = gr.build_grid(w, h)
        T = gr.grid_comb_tree(g)
        areas = [0.5 + 0.25 * k for k in range(len(g.bounded_faces))]
        families = {
            "facial": [lp.facial_lasso(T, f) for f in range(len(g.bounded_faces))],
            "row": [lp.grid_lasso(g, i, 0) for i in range(w)],
        }
        for name in args.groups.split(","):
            G = gp.build_group(name)
            m = lv.JumpMeasure.class_function(G, args.rate)
            gauge = T if G.order ** g.n_edges > ym.ENUMERATION_BUDGET else None
            for fam, loops in families.items():
                t0 = time.perf_counter()
                d = ym.paradigm_tv(g, T, areas, m, loops, gauge_tree=gauge)
                print(f"{w}x{h}   {name:5}  {fam:8}  {d:.3e}   {time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
