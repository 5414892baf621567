"""A measure on S3 that is quasi-invariant by conjugation through another measure but not by itself.

Prints the TV between the conjugation average of mu^{*n} and eta^{*n}, and
between the conjugation average of mu^{*n} and mu^{*n}, for n = 1..N.
"""

import argparse

from planar_ym import levy as lv
from planar_ym import suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-n", type=int, default=5)
    args = ap.parse_args()

    mu, eta = suite.counterexample_measures()
    G = mu.group
    print("weights of mu:", {G.label(g): round(float(p), 6) for g, p in enumerate(mu.probabilities)})
    pm = pe = lv.point_mass(G, G.identity)
    print("n  tv(avg mu^n, eta^n)  tv(avg mu^n, mu^n)")
    for n in range(1, args.n + 1):
        pm = lv.convolve(G, pm, mu.probabilities)
        pe = lv.convolve(G, pe, eta.probabilities)
        avg = lv.conjugation_average(G, pm)
        print(f"{n}  {lv.tv_distance(avg, pe):.3e}            {lv.tv_distance(avg, pm):.3e}")
    print("quasi-invariant through eta:", lv.quasi_invariance_check(mu, eta, args.n))
    print("quasi-invariant through itself:", lv.quasi_invariance_check(mu, mu, 1))


if __name__ == "__main__":
    main()
