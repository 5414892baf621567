"""Verification suites: law comparison tools and the named acceptance checks."""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from . import braid as br
from . import graph as gr
from . import groups as gp
from . import index as ix
from . import levy as lv
from . import loops as lp
from . import yangmills as ym

EXACT_TOL = 1e-9
ALPHA = 1e-3


@dataclass
class DistributionReport:
    name: str
    metric_name: str
    metric: float
    threshold: float
    passed: bool
    sizes: dict = field(default_factory=dict)
    seed: int | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name}: {self.metric_name} = {self.metric:.3g} (threshold {self.threshold:.3g})"


def _report(name, metric_name, metric, threshold, passed, **kw) -> DistributionReport:
    return DistributionReport(name, metric_name, float(metric), float(threshold), bool(passed), **kw)


# -- generic comparisons ------------------------------------------------------------

def compare_laws(a: ym.LoopLaw, b, mode: str = "exact", tol: float = EXACT_TOL,
                 name: str = "compare") -> DistributionReport:
    """Exact mode: TV between two tables.  Statistical mode: ``b`` is an
    ``(N, k)`` sample, tested against ``a`` by chi-square (pass iff p > tol)."""
    if mode == "exact":
        if not isinstance(b, ym.LoopLaw) or b.k != a.k or b.group.order != a.group.order:
            raise ValueError("incompatible law tables")
        d = a.tv(b)
        return _report(name, "tv", d, tol, d <= tol, sizes={"support": int((a.table > 0).sum())})
    if mode != "statistical":
        raise ValueError(f"unknown mode {mode!r}")
    X = np.asarray(b, dtype=np.int64)
    if X.ndim != 2 or X.shape[1] != a.k:
        raise ValueError("sample shape does not match the law")
    codes = gp.encode_tuples(X, a.group.order)
    if a.canonical:
        codes = gp.canonical_codes(a.group, a.k)[codes]
    obs = np.bincount(codes, minlength=a.table.size).astype(float)
    expected = a.table * len(X)
    if np.any(obs[expected == 0] > 0):
        p = 0.0
    else:
        keep = expected > 0
        p = float(stats.chisquare(obs[keep], expected[keep]).pvalue) if keep.sum() > 1 else 1.0
    return _report(name, "p_value", p, tol, p > tol, sizes={"samples": len(X)})


def _chi2_two_sample(codes_a: np.ndarray, codes_b: np.ndarray) -> float:
    cats, inv = np.unique(np.concatenate([codes_a, codes_b]), return_inverse=True)
    if len(cats) < 2:
        return 1.0
    table = np.zeros((2, len(cats)))
    np.add.at(table[0], inv[: len(codes_a)], 1)
    np.add.at(table[1], inv[len(codes_a):], 1)
    return float(stats.chi2_contingency(table)[1])


def braidability_test(samples: np.ndarray, braids: Sequence[br.BraidWord], group: gp.FiniteGroup,
                      alpha: float = ALPHA, name: str = "braidability") -> DistributionReport:
    """Chi-square comparison of braided and raw canonical forms.

    The sample is split in halves so the braided half and the reference half
    are independent.  Bonferroni over the braids.
    """
    X = np.asarray(samples, dtype=np.int64)
    n, k = X.shape
    canon = gp.canonical_codes(group, k)
    half = n // 2
    ref = canon[gp.encode_tuples(X[half:], group.order)]
    pvals = []
    for b in braids:
        if len(b) == 0:
            pvals.append(1.0)
            continue
        img = br.act_on_tuples(b, X[:half], group)
        pvals.append(_chi2_two_sample(canon[gp.encode_tuples(img, group.order)], ref))
    level = alpha / max(len(braids), 1)
    pmin = min(pvals) if pvals else 1.0
    return _report(name, "min_p_value", pmin, level, pmin > level,
                   sizes={"samples": n, "braids": len(braids)},
                   details={"p_values": pvals, "braids": [list(b.letters) for b in braids]})


# -- acceptance entries -----------------------------------------------------------

def s3_class_levy(rate: float = 0.7) -> lv.JumpMeasure:
    return lv.JumpMeasure.class_function(gp.symmetric(3), rate)


def check_paradigm_equivalence(seed=None) -> DistributionReport:
    start = time.perf_counter()
    worst, cases = 0.0, 0
    for w, h in [(1, 1), (2, 1), (2, 2)]:
        g = gr.build_grid(w, h)
        T = gr.grid_comb_tree(g)
        areas = [0.5 + 0.25 * k for k in range(len(g.bounded_faces))]
        facial = [lp.facial_lasso(T, f) for f in range(len(g.bounded_faces))]
        row = [lp.grid_lasso(g, i, 0) for i in range(w)]
        for G in (gp.cyclic(2), gp.cyclic(3), gp.symmetric(3)):
            m = lv.JumpMeasure.class_function(G, 0.7)
            gauge = T if G.order ** g.n_edges > ym.ENUMERATION_BUDGET else None
            for loops in (facial, row):
                worst = max(worst, ym.paradigm_tv(g, T, areas, m, loops, gauge_tree=gauge))
                cases += 1
    elapsed = time.perf_counter() - start
    ok = worst < EXACT_TOL and elapsed < 60
    return _report("1_paradigm_equivalence", "max_tv", worst, EXACT_TOL, ok, sizes={"cases": cases})


def counterexample_measures():
    G = gp.symmetric(3)
    m = lv.JumpMeasure.from_labels(G, {"(13)": 1, "(23)": 2, "(123)": 2})
    m0 = lv.JumpMeasure.class_function(G, 1.0)
    return m.density(1.0), m0.density(1.0)


def check_s3_counterexample(seed=None) -> DistributionReport:
    start = time.perf_counter()
    mu, eta = counterexample_measures()
    good = lv.quasi_invariance_check(mu, eta, 5, tol=1e-10)
    bad = lv.quasi_invariance_check(mu, mu, 1, tol=1e-10)
    G = mu.group
    worst, pm, pe = 0.0, lv.point_mass(G, G.identity), lv.point_mass(G, G.identity)
    for _ in range(5):
        pm = lv.convolve(G, pm, mu.probabilities)
        pe = lv.convolve(G, pe, eta.probabilities)
        worst = max(worst, lv.tv_distance(lv.conjugation_average(G, pm), pe))
    gap = lv.tv_distance(lv.conjugation_average(G, mu.probabilities), mu.probabilities)
    elapsed = time.perf_counter() - start
    return _report("2_s3_counterexample", "max_tv_to_eta", worst, 1e-10,
                   good and not bad and elapsed < 1.0,
                   details={"quasi_invariant_by_eta": good, "self_quasi_invariant": bad,
                            "self_gap": gap})


def check_refinement_invariance(seed=None) -> DistributionReport:
    G = gp.symmetric(3)
    m = lv.JumpMeasure.class_function(G, 0.7)
    g = gr.build_grid(2, 1)
    T = gr.grid_comb_tree(g)
    coarse_loops = [lp.grid_lasso(g, 0, 0), lp.grid_lasso(g, 1, 0), lp.strip_lasso(g, 0, 2)]
    worst, cases = 0.0, 0
    for face in range(2):
        i = face
        u, w = gr.grid_vertex(g, i, 0), gr.grid_vertex(g, i + 1, 1)
        for a in (0.25, 0.5, 0.75):
            ref = gr.split_face(g, face, u, w, areas=(a, 1.0 - a))
            fine = ref.graph
            Tf = gr.tree_from_edges(fine, T.tree_edges, T.root)
            for k in range(1, len(coarse_loops) + 1):
                for subset in _subsets(len(coarse_loops), k):
                    loops = [coarse_loops[s] for s in subset]
                    fine_loops = [gr.map_word(l, ref.coarse_to_fine) for l in loops]
                    before = ym.exact_lasso_law(g, T, None, m, loops, canonical=False)
                    after = ym.exact_lasso_law(fine, Tf, None, m, fine_loops, canonical=False)
                    worst = max(worst, before.tv(after))
                    cases += 1
    return _report("3_refinement_invariance", "max_tv", worst, EXACT_TOL, worst < EXACT_TOL,
                   sizes={"cases": cases})


def _subsets(n, k):
    return list(itertools.combinations(range(n), k))


def check_braid_invariance(seed=None) -> DistributionReport:
    G = gp.symmetric(3)
    m = lv.JumpMeasure.class_function(G, 0.7)
    g = gr.build_grid(2, 1)
    T = gr.grid_comb_tree(g)
    loops = [lp.grid_lasso(g, 0, 0), lp.grid_lasso(g, 1, 0)]
    b1 = br.BraidWord(2, (1,))
    act = lambda X: br.act_on_tuples(b1, X, G)  # noqa: E731
    eq = ym.exact_lasso_law(g, T, [1.0, 1.0], m, loops, canonical=False)
    d_equal = eq.map_tuples(act).tv(eq)
    law12 = ym.exact_lasso_law(g, T, [1.0, 2.0], m, loops, canonical=False)
    law21 = ym.exact_lasso_law(g, T, [2.0, 1.0], m, loops, canonical=False)
    d_swap = law12.map_tuples(act).tv(law21)
    d_noswap = law12.map_tuples(act).tv(law12)
    worst = max(d_equal, d_swap)
    return _report("4_braid_invariance", "max_tv", worst, EXACT_TOL, worst < EXACT_TOL,
                   details={"equal_areas_tv": d_equal, "swapped_areas_tv": d_swap,
                            "unswapped_tv": d_noswap})


def check_haar_marginals(seed=None) -> DistributionReport:
    worst, cases = 0.0, 0
    G = gp.symmetric(3)
    m = lv.JumpMeasure.class_function(G, 0.7)
    u = lv.uniform(G)
    for w, h in [(1, 1), (2, 1)]:
        g = gr.build_grid(w, h)
        paths = {gr.tree_path(T, T.root, v) for T in gr.all_spanning_trees(g)
                 for v in range(g.n_vertices) if v != T.root}
        for path in sorted(paths):
            law = ym.exact_density_law(g, None, m, [path], canonical=False)
            worst = max(worst, lv.tv_distance(law.table, u))
            cases += 1
        row = [lp.grid_lasso(g, i, 0) for i in range(w)]
        haar = ym.exact_haar_law(g, G, row)
        worst = max(worst, 0.5 * float(np.abs(haar.table - 1.0 / haar.table.size).sum()))
        cases += 1
    return _report("5_haar_marginals", "max_tv", worst, EXACT_TOL, worst < EXACT_TOL, sizes={"cases": cases})


def check_ito_kawada(seed=None) -> DistributionReport:
    G = gp.symmetric(3)
    p = np.zeros(G.order)
    p[G.identity] = 0.5
    for t in ("(12)", "(13)", "(23)"):
        p[G.element(t)] = 0.5 / 3
    res = lv.itokawada_mixing(G, p, 30, 0.01)
    trace = np.array(res.trace)
    monotone = bool(np.all(np.diff(trace) <= 1e-15))
    ok = monotone and res.n_star is not None and not res.degenerate
    return _report("6_ito_kawada", "tv_at_30", trace[-1], 0.01, ok,
                   details={"n_star": res.n_star, "monotone": monotone})


def check_jordan(seed=None) -> DistributionReport:
    groups = [gp.cyclic(n) for n in range(1, 13)] + [gp.symmetric(3), gp.symmetric(4)]
    mistakes, total = 0, 0
    for G in groups:
        for H in gp.all_subgroups(G):
            covered = gp.jordan_covering_check(G, H)
            mistakes += covered != (len(H) == G.order)
            total += 1
    return _report("7_jordan", "mistakes", mistakes, 0, mistakes == 0, sizes={"subgroups": total})


def outer_roots(g: gr.EmbeddedGraph) -> list:
    return sorted({g.tail(d) for d in g.outer_face.boundary})


def check_reduced_loops(seed=None) -> DistributionReport:
    failures, cases = 0, 0
    for w, h in [(1, 1), (2, 1), (2, 2)]:
        g = gr.build_grid(w, h)
        for T0 in gr.all_spanning_trees(g):
            for r in outer_roots(g):
                T = T0.rerooted(r)
                cases += 1
                try:
                    if len(lp.generator_edges(T)) != len(g.bounded_faces):
                        failures += 1
                        continue
                    bo = lp.boundary_order(g, T)
                    basis = lp.facial_basis_change(g, T)
                    lhs = basis.expand(bo.word)
                    if lhs != lp.outer_loop(g, T.root) or any(e != 1 for e in bo.eps):
                        failures += 1
                        continue
                    for k in range(1, len(g.bounded_faces) + 1):
                        expanded = basis.expand(basis.generator_in_faces[k])
                        if lp.loop_to_generator_word(expanded, T) != (k,):
                            failures += 1
                            break
                except AssertionError:
                    failures += 1
    return _report("8_reduced_loops", "failures", failures, 0, failures == 0, sizes={"trees": cases})


def facial_targets(g, TA, basesA, TB, basesB):
    """Facial lassos of basis B, in B's boundary order, written in basis A's ordered letters."""
    boA = lp.boundary_order(g, TA, basesA)
    fbA = lp.facial_basis_change(g, TA, basesA)
    boB = lp.boundary_order(g, TB, basesB)
    fbB = lp.facial_basis_change(g, TB, basesB)
    letter = {f: k + 1 for k, f in enumerate(boA.sigma)}
    out = []
    for f in boB.sigma:
        w = fbA.loop_to_facial(fbB.lassos[f])
        out.append(tuple(letter[abs(x) - 1] if x > 0 else -letter[abs(x) - 1] for x in w))
    return out, boA, boB


def braid_fixture():
    """Two tree/base choices on grid(2,2) rooted at the origin."""
    g = gr.build_grid(2, 2)
    TA = gr.grid_comb_tree(g)
    TB = gr.spanning_tree(g, 0, "bfs", order=list(range(g.n_edges))[::-1])
    basesB = [max(g.boundary_vertices(f), key=lambda v: g.vertex_ids[v]) for f in g.bounded_faces]
    return g, TA, None, TB, basesB


def check_braid_search(seed=None) -> DistributionReport:
    g, TA, bA, TB, bB = braid_fixture()
    targets, _, _ = facial_targets(g, TA, bA, TB, bB)
    artin = br.artin_check(targets)
    beta = br.find_braid(targets, 8)
    ok = artin and beta is not None
    if ok:
        images = br.act_on_free(beta, br.free_generators(len(targets)))
        ok = [tuple(x) for x in images] == [tuple(t) for t in targets]
    length = len(beta) if beta is not None else -1
    return _report("9_braid_search", "braid_length", length, 8, ok and 0 <= length <= 8,
                   details={"braid": list(beta.letters) if beta is not None else None,
                            "artin_check": artin})


def random_grid_loop(g, rng: random.Random, pieces: int = 3) -> tuple:
    w, h = g.grid["shape"]
    out = ()
    for _ in range(pieces):
        word = lp.grid_lasso(g, rng.randrange(w), rng.randrange(h))
        out += word if rng.random() < 0.5 else lp.inverse(word)
    return out


def check_index_field(seed=7, samples: int = 10 ** 6, threads: int = 1) -> DistributionReport:
    g = gr.build_grid(3, 3)
    rng = random.Random(seed)
    mismatches = 0
    points = [ix.face_interior_point(g, f.index) for f in g.bounded_faces]
    for _ in range(100):
        l1, l2 = random_grid_loop(g, rng), random_grid_loop(g, rng)
        p1, p2, p12 = g.path_points(l1), g.path_points(l2), g.path_points(l1 + l2)
        for x in points:
            n12 = ix.winding_number(p12, x)
            if n12 != ix.winding_number(p1, x) + ix.winding_number(p2, x):
                mismatches += 1
            if n12 != round(ix.winding_by_angles(p12, x)):
                mismatches += 1
    sq = gr.build_grid(1, 1)
    T = gr.grid_comb_tree(sq)
    loop = [lp.facial_lasso(T, 0)]
    a = 0.8
    zscores = {}
    for D in (0.0, 1.3):
        levy = lv.CircleLevy(1.0, D)
        est = ym.wilson_estimate(sq, T, [a], levy, loop, lambda X: np.cos(X[:, 0]), samples,
                                 rng=np.random.SeedSequence([seed, int(D * 10)]), threads=threads)
        exact = ym.circle_wilson_oracle(levy, a)
        zscores[f"D={D}"] = (est.mean - exact) / est.stderr
    zmax = max(abs(z) for z in zscores.values())
    ok = mismatches == 0 and zmax < 3
    return _report("10_index_field", "max_abs_z", zmax, 3.0, ok, sizes={"samples": samples, "loops": 100},
                   seed=seed, details={"winding_mismatches": mismatches, "z": zscores})


def check_holder(seed=None) -> DistributionReport:
    mu_levy = lv.JumpMeasure.from_labels(gp.symmetric(3), {"(13)": 1, "(23)": 2, "(123)": 2})
    times = [2.0 ** -k for k in range(21)]
    ok, K = lv.holder_check(mu_levy, times)
    prefix = [lv.holder_check(mu_levy, times[: j + 1])[1] for j in range(len(times))]
    drift = max(abs(k - K) / K for k in prefix[len(prefix) // 2:])
    return _report("11_holder_bound", "relative_K_drift", drift, 1e-12, ok and drift <= 1e-12,
                   details={"K": K, "K_prefix": prefix})


def _mc_fingerprint(seed: int, threads: int) -> str:
    G = gp.symmetric(3)
    g = gr.build_grid(2, 1)
    T = gr.grid_comb_tree(g)
    m = lv.JumpMeasure.class_function(G, 0.7)
    loops = [lp.grid_lasso(g, 0, 0), lp.strip_lasso(g, 0, 2)]
    ident = np.zeros(G.order)
    ident[G.identity] = 1.0
    est = ym.wilson_estimate(g, T, None, m, loops, lambda X: ident[X[:, 1]], 30000,
                             rng=seed, threads=threads, chunk=4000)
    return f"{est.mean:.17g} {est.stderr:.17g}"


def check_determinism(seed=7, threads: int = 1) -> DistributionReport:
    runs = {t: _mc_fingerprint(seed, t) for t in sorted({1, 2, max(threads, 1)})}
    again = _mc_fingerprint(seed, 1)
    ok = len(set(runs.values())) == 1 and again == runs[1]
    return _report("12_determinism", "distinct_outputs", len(set(runs.values()) | {again}), 1, ok,
                   seed=seed, details={"fingerprint": runs[1]})


@dataclass
class SuiteConfig:
    seed: int = 7
    threads: int = 1
    wilson_samples: int = 10 ** 6


SUITE: list[tuple[str, Callable]] = [
    ("1_paradigm_equivalence", lambda c: check_paradigm_equivalence()),
    ("2_s3_counterexample", lambda c: check_s3_counterexample()),
    ("3_refinement_invariance", lambda c: check_refinement_invariance()),
    ("4_braid_invariance", lambda c: check_braid_invariance()),
    ("5_haar_marginals", lambda c: check_haar_marginals()),
    ("6_ito_kawada", lambda c: check_ito_kawada()),
    ("7_jordan", lambda c: check_jordan()),
    ("8_reduced_loops", lambda c: check_reduced_loops()),
    ("9_braid_search", lambda c: check_braid_search()),
    ("10_index_field", lambda c: check_index_field(c.seed, c.wilson_samples, c.threads)),
    ("11_holder_bound", lambda c: check_holder()),
    ("12_determinism", lambda c: check_determinism(c.seed, c.threads)),
]


def run_all(config: SuiteConfig | None = None, only: Sequence[str] | None = None) -> list:
    """Run the named checks in declaration order; errors become failed reports."""
    config = config or SuiteConfig()
    out = []
    for name, fn in SUITE:
        if only and name not in only:
            continue
        try:
            out.append(fn(config))
        except Exception as exc:  # a crashing check is a failed check
            out.append(_report(name, "error", math.nan, 0, False,
                               details={"error": f"{type(exc).__name__}: {exc}"}))
    return out


def _fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return {True: "true", False: "false", None: "null"}[x]
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return f'"{x}"' if not math.isfinite(x) else f"{x:.17g}"
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        items = sorted(x.items(), key=lambda kv: str(kv[0]))
        return "{" + ", ".join(f"{_fmt(str(k))}: {_fmt(v)}" for k, v in items) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    raise TypeError(f"cannot serialise {type(x).__name__}")


def reports_json(reports: Sequence[DistributionReport], seed: int) -> str:
    """Deterministic JSON: sorted keys, floats with 17 significant digits, no timings."""
    body = {"seed": seed, "passed": all(r.passed for r in reports),
            "reports": [r.to_dict() for r in reports]}
    return _fmt(body) + "\n"


def reports_text(reports: Sequence[DistributionReport]) -> str:
    return "\n".join(r.line() for r in reports) + "\n"
