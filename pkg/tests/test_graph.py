import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from planar_ym import graph as gr


def test_grid_counts():
    g = gr.build_grid(3, 2)
    assert g.n_vertices == 12
    assert g.n_edges == 3 * 3 + 4 * 2
    assert len(g.bounded_faces) == 6
    assert g.n_vertices - g.n_edges + len(g.faces) == 2


def test_grid_face_order():
    g = gr.build_grid(3, 2)
    for j in range(2):
        for i in range(3):
            f = gr.grid_face(g, i, j)
            assert f.index == j * 3 + i
            assert f.signed_area == pytest.approx(1.0)


def test_outer_face_is_clockwise():
    g = gr.build_grid(2, 2)
    assert not g.outer_face.bounded
    assert g.outer_face.signed_area == pytest.approx(-4.0)
    assert all(f.signed_area > 0 for f in g.bounded_faces)


def test_every_dart_on_one_face():
    g = gr.build_grid(2, 3)
    seen = [d for f in g.faces for d in f.boundary]
    assert sorted(seen) == sorted(g.darts())


def test_face_boundaries_are_closed():
    g = gr.build_grid(2, 2)
    for f in g.faces:
        g.check_path(f.boundary)
        assert g.tail(f.boundary[0]) == g.head(f.boundary[-1])


def test_triangle_with_polyline():
    verts = [(1, 0, 0), (2, 2, 0), (3, 0, 2)]
    edges = [(1, 1, 2, None), (2, 2, 3, [[2, 0], [2, 2], [0, 2]]), (3, 3, 1, None)]
    g = gr.EmbeddedGraph(verts, edges)
    assert len(g.bounded_faces) == 1
    assert g.bounded_faces[0].signed_area == pytest.approx(4.0)


def test_crossing_rejected():
    verts = [(0, 0, 0), (1, 1, 1), (2, 1, 0), (3, 0, 1)]
    edges = [(1, 0, 1, None), (2, 2, 3, None), (3, 0, 2, None), (4, 1, 3, None)]
    with pytest.raises(gr.GraphError):
        gr.EmbeddedGraph(verts, edges)


def test_disconnected_rejected():
    verts = [(0, 0, 0), (1, 1, 0), (2, 5, 5), (3, 6, 5)]
    with pytest.raises(gr.GraphError):
        gr.EmbeddedGraph(verts, [(1, 0, 1, None), (2, 2, 3, None)])


def test_areas_default_and_override():
    g = gr.build_grid(2, 1)
    np.testing.assert_allclose(g.face_areas()[:2], [1, 1])
    np.testing.assert_allclose(g.face_areas([0.5, 2.0])[:2], [0.5, 2.0])
    with pytest.raises(gr.GraphError):
        g.face_areas([1.0])
    with pytest.raises(gr.GraphError):
        g.face_areas([1.0, -1.0])


def test_json_round_trip():
    g = gr.build_grid(2, 2)
    h = gr.EmbeddedGraph.from_json(json.loads(json.dumps(g.to_json())))
    assert gr.same_embedding(g, h)
    assert [f.key for f in g.faces] == [f.key for f in h.faces]


def test_spanning_tree_count():
    # Kirchhoff: the 3x3 grid graph has 192 spanning trees
    g = gr.build_grid(2, 2)
    trees = gr.all_spanning_trees(g)
    assert len(trees) == 192
    assert len({frozenset(T.tree_edges) for T in trees}) == 192


def test_kirchhoff_oracle():
    g = gr.build_grid(2, 3)
    L = np.zeros((g.n_vertices, g.n_vertices))
    for e in g.edges:
        L[e.tail, e.tail] += 1
        L[e.head, e.head] += 1
        L[e.tail, e.head] -= 1
        L[e.head, e.tail] -= 1
    assert len(gr.all_spanning_trees(g)) == round(np.linalg.det(L[1:, 1:]))


@pytest.mark.parametrize("policy", ["bfs"])
def test_tree_invariants(policy):
    g = gr.build_grid(3, 2)
    T = gr.spanning_tree(g, 4, policy)
    assert len(T.tree_edges) == g.n_vertices - 1
    for v in range(g.n_vertices):
        p = gr.tree_path(T, T.root, v)
        g.check_path(p)
        if p:
            assert g.tail(p[0]) == T.root and g.head(p[-1]) == v


def test_comb_tree_shape():
    g = gr.build_grid(2, 2)
    T = gr.grid_comb_tree(g)
    expect = {g.grid["r", i, 0] for i in range(2)} | {g.grid["u", i, j] for i in range(3) for j in range(2)}
    assert set(T.tree_edges) == expect


def test_cycle_is_not_a_tree():
    g = gr.build_grid(1, 1)
    with pytest.raises(gr.GraphError):
        gr.tree_from_edges(g, [0, 1, 2, 3], 0)


def test_cotree_map_covers_faces():
    g = gr.build_grid(2, 2)
    T = gr.grid_comb_tree(g)
    cm = gr.cotree_parent_map(g, T)
    # every bounded face hangs below the unbounded root face
    assert sorted(cm.order) == [f.index for f in g.bounded_faces]


def test_subdivide_and_merge_round_trip():
    g = gr.build_grid(2, 1)
    ref = gr.subdivide_edge(g, 0, (0.5, 0.0))
    fine = ref.graph
    assert fine.n_vertices == g.n_vertices + 1
    assert len(fine.bounded_faces) == len(g.bounded_faces)
    v = fine.vertex(max(fine.vertex_ids))
    back = gr.remove_degree2_vertex(fine, v).graph
    assert gr.same_embedding(g, back)
    word = gr.map_word(g.faces[0].boundary, ref.coarse_to_fine)
    fine.check_path(word)


def test_split_face_areas_and_merge():
    g = gr.build_grid(2, 1)
    u, w = gr.grid_vertex(g, 0, 0), gr.grid_vertex(g, 1, 1)
    ref = gr.split_face(g, 0, u, w, areas=(0.25, 0.75))
    fine = ref.graph
    assert len(fine.bounded_faces) == 3
    assert sorted(fine.face_areas()[: 3]) == [0.25, 0.75, 1.0]
    chord = fine.n_edges - 1
    back = gr.remove_edge_merge_faces(fine, chord).graph
    assert gr.same_embedding(g, back)


def test_split_face_bad_area():
    g = gr.build_grid(1, 1)
    with pytest.raises(gr.GraphError):
        gr.split_face(g, 0, 0, 3, areas=(0.5, 0.6))


def test_bridge_removal_rejected():
    verts = [(0, 0, 0), (1, 1, 0), (2, 0, 1), (3, 2, 0)]
    edges = [(1, 0, 1, None), (2, 1, 2, None), (3, 2, 0, None), (4, 1, 3, None)]
    g = gr.EmbeddedGraph(verts, edges)
    with pytest.raises(gr.GraphError):
        gr.remove_edge_merge_faces(g, 3)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4))
def test_euler_and_areas(w, h):
    g = gr.build_grid(w, h)
    assert g.n_vertices - g.n_edges + len(g.faces) == 2
    assert sum(f.signed_area for f in g.bounded_faces) == pytest.approx(w * h)
    assert g.outer_face.signed_area == pytest.approx(-w * h)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_bfs_tree_from_any_root(w, h, data):
    g = gr.build_grid(w, h)
    root = data.draw(st.integers(0, g.n_vertices - 1))
    T = gr.spanning_tree(g, root, "bfs")
    assert T.root == root
    assert len(T.non_tree_edges()) == len(g.bounded_faces)
