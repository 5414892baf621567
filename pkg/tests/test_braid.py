import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planar_ym import braid as br
from planar_ym import groups as gp


def evaluate(G, word, x):
    """Holonomy of a free word with reversed products: h(w1 ... wk) = h(wk) ... h(w1)."""
    acc = G.identity
    for a in word:
        v = x[abs(a) - 1] if a > 0 else G.inv[x[abs(a) - 1]]
        acc = G.mul[v, acc]
    return int(acc)


def braid_words(n, max_len=6):
    return st.lists(st.integers(1, n - 1).flatmap(lambda i: st.sampled_from([i, -i])),
                    max_size=max_len).map(lambda ls: br.BraidWord(n, tuple(ls)))


def test_s3_generator_action(s3):
    x = (s3.element("(12)"), s3.element("(13)"))
    y = br.act_on_tuple(br.BraidWord(2, (1,)), x, s3)
    assert gp.cycle_label(s3, y[0]) == "(23)"
    assert gp.cycle_label(s3, y[1]) == "(12)"


def test_inverse_undoes(s3):
    b = br.BraidWord(3, (1, -2, 1, 2))
    X = np.array(list(itertools.product(range(6), repeat=3)))
    Y = br.act_on_tuples(b.inverse(), br.act_on_tuples(b, X, s3), s3)
    np.testing.assert_array_equal(X, Y)


def test_braid_relation_on_s3(s3):
    X = np.array(list(itertools.product(range(6), repeat=3)))
    lhs = br.act_on_tuples(br.BraidWord(3, (1, 2, 1)), X, s3)
    rhs = br.act_on_tuples(br.BraidWord(3, (2, 1, 2)), X, s3)
    np.testing.assert_array_equal(lhs, rhs)
    far = np.array(list(itertools.product(range(6), repeat=4)))[:300]
    np.testing.assert_array_equal(br.act_on_tuples(br.BraidWord(4, (1, 3)), far, s3),
                                  br.act_on_tuples(br.BraidWord(4, (3, 1)), far, s3))


def test_free_action_generator():
    assert br.act_on_free(br.BraidWord(2, (1,)), br.free_generators(2)) == [(2,), (2, 1, -2)]
    assert br.act_on_free(br.BraidWord(2, (-1,)), br.free_generators(2)) == [(-1, 2, 1), (1,)]


def test_artin_check():
    assert br.artin_check(br.free_generators(3))
    assert not br.artin_check([(1, 2), (2,)])
    assert not br.artin_check([(2,), (1,)])


def test_permutation_of():
    assert br.permutation_of(br.BraidWord(3, (1,))) == (1, 0, 2)
    a, b = br.BraidWord(3, (1,)), br.BraidWord(3, (2,))
    pa, pb = br.permutation_of(a), br.permutation_of(b)
    assert br.permutation_of(a * b) == tuple(pa[pb[i]] for i in range(3))


def test_find_braid_recovers_known():
    target = br.act_on_free(br.BraidWord(3, (1, -2)), br.free_generators(3))
    found = br.find_braid(target, 4)
    assert found is not None and len(found) == 2
    assert br.act_on_free(found, br.free_generators(3)) == target


def test_find_braid_gives_up():
    assert br.find_braid([(1, 2), (2,)], 3) is None


def test_spreading_braid():
    G = gp.cyclic(2)
    n = 6
    for k in [(2, 5), (1, 3, 6), (4,)]:
        b = br.spreading_braid(k, n)
        for x in itertools.product(range(2), repeat=n):
            y = br.act_on_tuple(b, x, G)
            assert y[: len(k)] == tuple(x[i - 1] for i in k)


def test_pair_braid(s3):
    G = gp.symmetric(4)
    for i, j in [(1, 2), (1, 3), (2, 4)]:
        b = br.pair_braid(i, j, 4)
        for x in [(3, 5, 7, 11), (1, 2, 20, 9)]:
            y = br.act_on_tuple(b, x, G)
            assert y[j - 1] == x[i - 1]
            assert y[i - 1] == G.product([x[i - 1], x[j - 1], G.inv[x[i - 1]]])


def test_parse_and_validate():
    assert br.parse_braid("[1,-2]", 3).letters == (1, -2)
    with pytest.raises(br.BraidError):
        br.parse_braid("[3]", 3)
    with pytest.raises(br.BraidError):
        br.parse_braid("1,2", 3)
    with pytest.raises(br.BraidError):
        br.BraidWord(1)


def test_braids_up_to_counts():
    # reduced words in 2 letters and their inverses: 1 + 2 + 2
    assert len(list(br.braids_up_to(2, 2))) == 5


@settings(max_examples=80, deadline=None)
@given(braid_words(3), st.lists(st.integers(0, 5), min_size=3, max_size=3))
def test_free_and_tuple_actions_agree(b, x):
    G = gp.symmetric(3)
    images = br.act_on_free(b, br.free_generators(3))
    lhs = tuple(evaluate(G, w, x) for w in images)
    assert lhs == br.act_on_tuple(b.inverse(), x, G)


@settings(max_examples=80, deadline=None)
@given(braid_words(4))
def test_free_images_pass_artin(b):
    assert br.artin_check(br.act_on_free(b, br.free_generators(4)))


@settings(max_examples=80, deadline=None)
@given(braid_words(3), st.lists(st.integers(0, 5), min_size=3, max_size=3))
def test_tuple_action_keeps_ordered_product(b, x):
    G = gp.symmetric(3)
    y = br.act_on_tuple(b, x, G)
    assert G.product(y) == G.product(x)
    # each entry stays in a conjugacy class of the input, permuted by the braid
    cls = gp.class_index(G)
    assert sorted(cls[list(y)]) == sorted(cls[list(x)])


def test_duality_exhaustive_on_z3_pairs():
    G = gp.cyclic(3)
    pairs = list(itertools.product(range(3), repeat=2))
    for b in br.braids_up_to(2, 4):
        images = br.act_on_free(b, br.free_generators(2))
        for x in pairs:
            assert tuple(evaluate(G, w, x) for w in images) == br.act_on_tuple(b.inverse(), x, G)
