import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from planar_ym import groups as gp
from planar_ym import levy as lv


def expm_oracle(m, t):
    """Forward equation of the right-increment jump process, solved with expm."""
    G = m.group
    A = np.zeros((G.order, G.order))
    for y in G.elements:
        for g in G.elements:
            A[G.mul[y, g], y] += m.rates[g]
        A[y, y] -= m.total_rate
    p0 = np.zeros(G.order)
    p0[G.identity] = 1.0
    return expm(t * A) @ p0


@pytest.fixture
def counter(s3):
    return lv.JumpMeasure.from_labels(s3, {"(13)": 1, "(23)": 2, "(123)": 2})


@pytest.mark.parametrize("t", [0.0, 0.01, 0.5, 1.0, 3.7, 20.0])
def test_density_matches_expm(counter, t):
    np.testing.assert_allclose(counter.density(t).probabilities, expm_oracle(counter, t), atol=1e-12)


def test_z2_closed_form():
    Z2 = gp.cyclic(2)
    m = lv.JumpMeasure(Z2, np.array([0.0, 1.0]))
    for t in (0.1, 1.0, 2.5):
        assert m.density(t).probabilities[0] == pytest.approx((1 + math.exp(-2 * t)) / 2, abs=1e-13)


def test_semigroup(counter):
    G = counter.group
    a, b = counter.density(0.3).probabilities, counter.density(1.1).probabilities
    np.testing.assert_allclose(lv.convolve(G, a, b), counter.density(1.4).probabilities, atol=1e-12)


def test_convolution_order(s3):
    a, b = s3.element("(12)"), s3.element("(13)")
    p = lv.convolve(s3, lv.point_mass(s3, a), lv.point_mass(s3, b))
    assert p[s3.multiply(a, b)] == 1.0


def test_sampler_matches_density(counter, rng):
    x = counter.sample(0.8, rng, size=200000)
    freq = np.bincount(x, minlength=6) / x.size
    assert lv.tv_distance(freq, counter.density(0.8).probabilities) < 0.01


def test_bad_rates(s3):
    with pytest.raises(lv.LevyError):
        lv.JumpMeasure(s3, -np.ones(6))
    r = np.ones(6)
    with pytest.raises(lv.LevyError):
        lv.JumpMeasure(s3, r)
    with pytest.raises(lv.LevyError):
        lv.Density(s3, np.full(6, 0.2))


def test_invariance_scope(s3, counter):
    assert lv.invariance_scope(lv.JumpMeasure.class_function(s3))[0] == "pure"
    assert lv.invariance_scope(counter)[0] == "neither"
    # Z3 inside S3: conjugation by the 3-cycles is trivial on them
    m = lv.JumpMeasure.from_labels(s3, {"(123)": 1.0, "(132)": 0.5})
    scope, H = lv.invariance_scope(m)
    assert scope == "self_invariant" and len(H) == 3


def test_itokawada_trace(s3):
    p = np.zeros(6)
    p[s3.identity] = 0.5
    for lab in ("(12)", "(13)", "(23)"):
        p[s3.element(lab)] = 0.5 / 3
    res = lv.itokawada_mixing(s3, p, 30, 0.01)
    assert not res.degenerate
    assert res.n_star is not None and res.n_star <= 30
    assert all(b <= a + 1e-15 for a, b in zip(res.trace, res.trace[1:]))


def test_itokawada_degenerate(s3):
    p = lv.point_mass(s3, s3.element("(12)"))
    res = lv.itokawada_mixing(s3, p, 10, 0.01)
    assert res.degenerate and res.n_star is None


def test_quasi_invariance_counterexample(s3):
    mu = np.array([0, 1, 2, 2, 0], dtype=float)
    labels = ["(12)", "(13)", "(23)", "(123)", "(132)"]
    p = np.zeros(6)
    for lab, w in zip(labels, mu):
        p[s3.element(lab)] = w
    p[s3.identity] = 1.0
    p /= p.sum()
    m = lv.Density(s3, p)
    eta = lv.Density(s3, lv.conjugation_average(s3, p))
    assert lv.quasi_invariance_check(m, eta, 5)
    assert not lv.quasi_invariance_check(m, m, 1)


def test_holder(counter):
    times = [2.0 ** -k for k in range(21)]
    ok, K = lv.holder_check(counter, times)
    assert ok
    gaps = [1 - counter.density(t).probabilities[counter.group.identity] for t in times]
    assert K == pytest.approx(max(g / math.sqrt(t) for g, t in zip(gaps, times)))


def test_circle_density_normalised():
    c = lv.CircleLevy(1.0, 0.3)
    theta = np.linspace(0, 2 * np.pi, 4001)
    dens = lv.circle_density(c, 0.7, theta)
    assert np.trapezoid(dens, theta) == pytest.approx(1.0, abs=1e-9)


def test_circle_characteristic(rng):
    c = lv.CircleLevy(1.0, 0.5)
    x = c.sample(0.8, rng, size=400000)
    assert np.mean(np.cos(x)) == pytest.approx(math.cos(0.4) * math.exp(-0.4), abs=5e-3)


def test_build_levy(s3):
    m = lv.build_levy({"jumps": {"(12)": 1}}, s3)
    assert m.rates[s3.element("(12)")] == 1
    assert isinstance(lv.build_levy({"circle": {"sigma2": 2}}), lv.CircleLevy)
    with pytest.raises(lv.LevyError):
        lv.build_levy({})


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0, 3), min_size=5, max_size=5), st.floats(0.01, 2), st.floats(0.01, 2))
def test_semigroup_property(rates, s, t):
    G = gp.symmetric(3)
    m = lv.JumpMeasure(G, np.array([0.0] + rates))
    lhs = lv.convolve(G, m.density(s).probabilities, m.density(t).probabilities)
    np.testing.assert_allclose(lhs, m.density(s + t).probabilities, atol=1e-11)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 3), st.integers(0, 5))
def test_pure_density_is_class_function(t, x):
    G = gp.symmetric(3)
    p = lv.JumpMeasure.class_function(G, 0.7).density(t).probabilities
    np.testing.assert_allclose(lv.conjugate_measure(G, p, x), p, atol=1e-14)
