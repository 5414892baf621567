"""Monte Carlo Wilson loops for Brownian motion on the circle.

For a square of area a wound n times the exact value is
cos(n D a) exp(-sigma2 n^2 a / 2); the script prints estimate, exact value
and z-score on a grid of areas.
"""

import argparse

import numpy as np

from planar_ym import graph as gr
from planar_ym import levy as lv
from planar_ym import loops as lp
from planar_ym import yangmills as ym


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=200000)
    ap.add_argument("--drift", type=float, default=0.0)
    ap.add_argument("--sigma2", type=float, default=1.0)
    ap.add_argument("--winding", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    g = gr.build_grid(1, 1)
    T = gr.grid_comb_tree(g)
    loop = lp.power(lp.grid_lasso(g, 0, 0), args.winding)
    levy = lv.CircleLevy(args.sigma2, args.drift)
    print("area   estimate   exact      z")
    for k, a in enumerate(np.linspace(0.2, 2.0, 10)):
        est = ym.wilson_estimate(g, T, [a], levy, [loop], lambda X: np.cos(X[:, 0]), args.samples,
                                 rng=np.random.SeedSequence([args.seed, k]), threads=args.threads)
        exact = ym.circle_wilson_oracle(levy, a, args.winding)
        print(f"{a:.2f}   {est.mean:+.5f}   {exact:+.5f}   {(est.mean - exact) / est.stderr:+.2f}")


if __name__ == "__main__":
    main()
