"""The twelve acceptance criteria, one test each.

Every test records a PASS/FAIL line that is printed in the terminal summary
(and immediately with ``-s``).
"""

import subprocess
import sys
import time

from planar_ym import braid as br
from planar_ym import suite

from conftest import ACCEPTANCE_LINES


def record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:2d} {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def timed(fn, *args):
    start = time.perf_counter()
    rep = fn(*args)
    return rep, time.perf_counter() - start


def test_01_paradigm_equivalence():
    rep, dt = timed(suite.check_paradigm_equivalence)
    ok = rep.passed and rep.metric < 1e-9 and dt < 60 and rep.sizes["cases"] == 18
    assert record(1, "paradigm equivalence", ok, f"max TV {rep.metric:.2e} over {rep.sizes['cases']} cases in {dt:.1f}s")


def test_02_s3_counterexample():
    rep, dt = timed(suite.check_s3_counterexample)
    d = rep.details
    ok = rep.passed and d["quasi_invariant_by_eta"] and not d["self_quasi_invariant"] and dt < 1.0
    assert record(2, "S3 counter-example", ok,
                  f"eta check {d['quasi_invariant_by_eta']}, self check {d['self_quasi_invariant']}, {dt * 1000:.0f} ms")


def test_03_refinement_invariance():
    rep = suite.check_refinement_invariance()
    ok = rep.passed and rep.metric < 1e-9
    assert record(3, "refinement invariance", ok, f"max TV {rep.metric:.2e} over {rep.sizes['cases']} cases")


def test_04_braid_invariance():
    rep = suite.check_braid_invariance()
    ok = rep.passed and rep.metric < 1e-9
    assert record(4, "braid invariance", ok, f"max TV {rep.metric:.2e}")


def test_05_haar_marginals():
    rep = suite.check_haar_marginals()
    ok = rep.passed and rep.metric < 1e-9
    assert record(5, "Haar marginals", ok, f"max TV {rep.metric:.2e}")


def test_06_ito_kawada():
    rep = suite.check_ito_kawada()
    n_star = rep.details["n_star"]
    ok = rep.passed and rep.details["monotone"] and n_star is not None and n_star <= 30
    assert record(6, "Ito-Kawada", ok, f"TV < 0.01 from n = {n_star}, monotone {rep.details['monotone']}")


def test_07_jordan():
    rep = suite.check_jordan()
    ok = rep.passed and rep.metric == 0
    assert record(7, "Jordan covering", ok, f"{int(rep.metric)} mistakes over {rep.sizes['subgroups']} subgroups")


def test_08_reduced_loops():
    rep = suite.check_reduced_loops()
    ok = rep.passed and rep.metric == 0
    assert record(8, "reduced loops", ok, f"{int(rep.metric)} failures over {rep.sizes['trees']} rooted trees")


def test_09_braid_search():
    g, TA, bA, TB, bB = suite.braid_fixture()
    targets, _, _ = suite.facial_targets(g, TA, bA, TB, bB)
    beta = br.find_braid(targets, 8)
    ok = beta is not None and len(beta) <= 8
    if ok:
        ok = br.act_on_free(beta, br.free_generators(len(targets))) == [tuple(t) for t in targets]
    rep = suite.check_braid_search()
    ok = ok and rep.passed
    assert record(9, "braid search", ok, f"braid {beta} of length {len(beta) if beta else '-'}")


def test_10_index_field():
    rep = suite.check_index_field(7, 10 ** 6, 1)
    d = rep.details
    ok = rep.passed and rep.metric < 3 and d["winding_mismatches"] == 0
    assert record(10, "index field", ok, f"winding mismatches {d['winding_mismatches']}, "
                  f"max |z| {rep.metric:.2f} at 1e6 samples")


def test_11_holder_bound():
    rep = suite.check_holder()
    ok = rep.passed
    assert record(11, "Holder bound", ok, f"K = {rep.details['K']:.4f}, drift {rep.metric:.1e}")


def test_12_determinism(tmp_path):
    outs = []
    for threads in (1, 1, 2, 4):
        path = tmp_path / f"report_{len(outs)}.json"
        proc = subprocess.run([sys.executable, "-m", "planar_ym", "verify", "--all", "--seed", "7",
                               "--threads", str(threads), "--out", str(path)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outs.append((path.read_bytes(), proc.stdout))
    ok = len(set(outs)) == 1
    assert record(12, "determinism", ok, f"{len(set(outs))} distinct report(s) over 4 runs, threads 1/1/2/4")
