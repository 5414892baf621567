import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planar_ym import graph as gr
from planar_ym import loops as lp

letters = st.integers(-3, 3).filter(lambda x: x != 0)
words = st.lists(letters, max_size=12)


def stack_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def conj_brute(a, b, radius=2):
    """Search conjugators among all reduced words of small length."""
    gens = [1, -1, 2, -2, 3, -3]
    frontier = [()]
    seen = [()]
    for _ in range(radius):
        frontier = [w + (x,) for w in frontier for x in gens if not w or w[-1] != -x]
        seen += frontier
    b = stack_reduce(b)
    return any(stack_reduce(lp.inverse(c) + tuple(a) + c) == b for c in seen)


@settings(max_examples=200, deadline=None)
@given(words)
def test_free_reduce_matches_stack(w):
    r = lp.free_reduce(w)
    assert r == stack_reduce(w)
    assert all(a != -b for a, b in zip(r, r[1:]))


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_inverse_is_antihomomorphism(a, b):
    assert lp.free_reduce(lp.inverse(tuple(a) + tuple(b))) == lp.free_reduce(lp.inverse(b) + lp.inverse(a))
    assert lp.free_reduce(tuple(a) + lp.inverse(a)) == ()


@settings(max_examples=100, deadline=None)
@given(st.lists(letters, min_size=1, max_size=5), st.lists(letters, max_size=2))
def test_conjugate_detection(w, c):
    conj = tuple(lp.inverse(c)) + tuple(w) + tuple(c)
    assert lp.are_conjugate(w, conj)


@pytest.mark.parametrize("a,b", [((1, 2), (2, 1)), ((1, 2, 3), (3, 2, 1)), ((1,), (1, 1)),
                                 ((1, -2), (-2, 1)), ((1, 2, -1), (2,)), ((1, 1, 2), (1, 2, 1))])
def test_conjugacy_against_search(a, b):
    assert lp.are_conjugate(a, b) == conj_brute(a, b)


def test_power_and_cyclic_reduce():
    assert lp.power((1, 2), 2) == (1, 2, 1, 2)
    assert lp.power((1, 2), -1) == (-2, -1)
    assert lp.cyclic_reduce((-3, 1, 2, 3)) == (1, 2)


def test_generators_count():
    for w, h in [(1, 1), (2, 1), (2, 2), (3, 2)]:
        g = gr.build_grid(w, h)
        T = gr.spanning_tree(g, 0)
        assert len(lp.generator_edges(T)) == len(g.bounded_faces)


def test_loop_to_generator_word_round_trip():
    g = gr.build_grid(2, 2)
    T = gr.grid_comb_tree(g)
    for k, e in enumerate(lp.generator_edges(T)):
        lasso = lp.lasso_of_edge(T, gr.dart(e))
        assert lp.loop_to_generator_word(lasso, T) == (k + 1,)
        assert lp.expand_generators((k + 1,), T) == lasso


def test_grid_lassos_are_facial_lassos_of_comb_tree():
    g = gr.build_grid(3, 2)
    T = gr.grid_comb_tree(g)
    for j in range(2):
        for i in range(3):
            f = gr.grid_face(g, i, j).index
            assert lp.facial_lasso(T, f, gr.grid_vertex(g, i, j)) == lp.grid_lasso(g, i, j)


def test_strip_lasso_composition():
    g = gr.build_grid(3, 1)
    L = [lp.grid_lasso(g, i, 0) for i in range(3)]
    assert lp.strip_lasso(g, 0, 1) == L[0]
    # as paths the right-hand cell is walked first
    assert lp.strip_lasso(g, 0, 2) == lp.free_reduce(L[1] + L[0])
    assert lp.strip_lasso(g, 0, 3) == lp.free_reduce(L[2] + L[1] + L[0])


def test_comb_identity():
    # the lasso of a horizontal non-tree edge is a product of the lassos below it
    g = gr.build_grid(2, 3)
    T = gr.grid_comb_tree(g)
    for i in range(2):
        for j in range(1, 4):
            e = gr.grid_dart(g, "r", i, j)
            below = lp.free_reduce([x for k in range(j) for x in lp.grid_lasso(g, i, k)])
            assert lp.inverse(lp.lasso_of_edge(T, e)) == below


@pytest.mark.parametrize("shape", [(1, 1), (2, 1), (2, 2)])
def test_outer_loop_is_ordered_facial_product(shape):
    g = gr.build_grid(*shape)
    for T0 in gr.all_spanning_trees(g)[:40]:
        for r in sorted({g.tail(d) for d in g.outer_face.boundary}):
            T = T0.rerooted(r)
            bo = lp.boundary_order(g, T)
            basis = lp.facial_basis_change(g, T)
            assert basis.expand(bo.word) == lp.outer_loop(g, r)
            assert sorted(bo.sigma) == list(range(len(g.bounded_faces)))


def test_basis_change_round_trip_random_bases(rng):
    g = gr.build_grid(2, 2)
    T = gr.spanning_tree(g, 0)
    for _ in range(20):
        bases = [int(rng.choice(g.boundary_vertices(f))) for f in g.bounded_faces]
        cw = rng.integers(2, size=len(bases)).astype(bool).tolist()
        basis = lp.facial_basis_change(g, T, bases, cw)
        for k in range(1, len(bases) + 1):
            assert lp.loop_to_generator_word(basis.expand(basis.generator_in_faces[k]), T) == (k,)


def test_base_change_gives_conjugate_lassos():
    g = gr.build_grid(2, 2)
    T = gr.grid_comb_tree(g)
    for f in g.bounded_faces:
        vs = g.boundary_vertices(f)
        ws = [lp.loop_to_generator_word(lp.facial_lasso(T, f.index, v), T) for v in vs]
        assert all(lp.are_conjugate(ws[0], w) for w in ws[1:])


def test_bad_base_and_strip():
    g = gr.build_grid(2, 1)
    with pytest.raises(lp.LoopError):
        lp.strip_lasso(g, 1, 1)
    with pytest.raises(lp.LoopError):
        lp.outer_loop(gr.build_grid(3, 3), gr.grid_vertex(gr.build_grid(3, 3), 1, 1))


def test_adapted_tree_contains_loop_edges():
    g = gr.build_grid(2, 2)
    l1, l2 = lp.grid_cell_boundary(g, 0, 0), lp.grid_cell_boundary(g, 1, 1)
    T = lp.adapted_tree(g, l1, l2, 0)
    assert len(T.tree_edges) == g.n_vertices - 1
    assert T.root == 0
    assert all(T.contains(d) for d in l1[:-1] + l2[:-1])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([(0, 0), (1, 0), (0, 1), (1, 1)]), min_size=1, max_size=6),
       st.lists(st.booleans(), min_size=6, max_size=6))
def test_generator_words_multiply(cells, signs):
    g = gr.build_grid(2, 2)
    T = gr.grid_comb_tree(g)
    pieces = [lp.grid_lasso(g, i, j) if s else lp.inverse(lp.grid_lasso(g, i, j))
              for (i, j), s in zip(cells, signs)]
    whole = lp.loop_to_generator_word(lp.free_reduce([x for p in pieces for x in p]), T)
    parts = lp.free_reduce([x for p in pieces for x in lp.loop_to_generator_word(p, T)])
    assert whole == parts
