"""Reduced loops, lasso generators and facial bases.

Edge words are tuples of darts (see :mod:`planar_ym.graph`).  Free-group words
use the same encoding with letters ``±k`` standing for the ``k``-th generator
or its inverse, so :func:`free_reduce` serves both.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import (
    EmbeddedGraph,
    Face,
    GraphError,
    SpanningTree,
    dart,
    edge_index,
    grid_dart,
    grid_vertex,
    tree_from_edges,
    tree_path,
)

Word = tuple


class LoopError(ValueError):
    pass


# -- free reduction ---------------------------------------------------------------

def free_reduce(word: Sequence[int]) -> Word:
    stack: list[int] = []
    for x in word:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def power(word: Sequence[int], k: int) -> Word:
    base = tuple(word) if k >= 0 else inverse(word)
    return free_reduce(base * abs(k))


def are_conjugate(a: Sequence[int], b: Sequence[int]) -> bool:
    """Conjugacy in a free group: cyclic reductions agree up to rotation."""
    x, y = cyclic_reduce(a), cyclic_reduce(b)
    if len(x) != len(y):
        return False
    if not x:
        return True
    doubled = x + x
    return any(doubled[k:k + len(x)] == y for k in range(len(x)))


def reduce(word: Sequence[int], g: EmbeddedGraph | None = None) -> Word:
    """Cancel backtracks ``d, -d`` until none remain.

    With a graph, the word is first checked to be a concatenable path.
    """
    word = tuple(int(d) for d in word)
    if g is not None:
        try:
            g.check_path(word)
        except GraphError as exc:
            raise LoopError(str(exc)) from None
    return free_reduce(word)


def is_loop(g: EmbeddedGraph, word: Sequence[int], base: int | None = None) -> bool:
    if not word:
        return True
    g.check_path(word)
    closed = g.tail(word[0]) == g.head(word[-1])
    return closed and (base is None or g.tail(word[0]) == base)


# -- lassos and generators --------------------------------------------------------

def generator_edges(T: SpanningTree) -> list[int]:
    """Non-tree edges in increasing index order; edge ``k`` of this list is generator ``k+1``."""
    return T.non_tree_edges()


def lasso_of_edge(T: SpanningTree, d: int) -> Word:
    """``[v, tail(d)]_T  d  [head(d), v]_T``, reduced."""
    g = T.graph
    if d == 0 or abs(d) > g.n_edges:
        raise LoopError(f"dart {d} not in graph")
    return free_reduce(tree_path(T, T.root, g.tail(d)) + (d,) + tree_path(T, g.head(d), T.root))


def expand_generators(word: Sequence[int], T: SpanningTree) -> Word:
    """Edge word of a product of lasso generators."""
    gens = generator_edges(T)
    out: list[int] = []
    for x in word:
        if x == 0 or abs(x) > len(gens):
            raise LoopError(f"generator {x} out of range")
        out.extend(lasso_of_edge(T, dart(gens[abs(x) - 1], 1 if x > 0 else -1)))
    return free_reduce(out)


def root_loop(T: SpanningTree, loop: Sequence[int]) -> Word:
    """Conjugate a loop to the root along tree paths (unreduced)."""
    g = T.graph
    loop = tuple(loop)
    if not loop:
        return ()
    if not is_loop(g, loop):
        raise LoopError("word is not a closed loop")
    b = g.tail(loop[0])
    return tree_path(T, T.root, b) + loop + tree_path(T, b, T.root)


def loop_to_generator_word(loop: Sequence[int], T: SpanningTree) -> Word:
    g = T.graph
    loop = tuple(loop)
    try:
        g.check_path(loop)
    except GraphError as exc:
        raise LoopError(str(exc)) from None
    number = {e: k + 1 for k, e in enumerate(generator_edges(T))}
    out = []
    for d in root_loop(T, loop):
        k = number.get(edge_index(d))
        if k is not None:
            out.append(k if d > 0 else -k)
    return free_reduce(out)


# -- facial lassos ---------------------------------------------------------------

def _face(g: EmbeddedGraph, face) -> Face:
    f = g.faces[face] if not isinstance(face, Face) else face
    if not f.bounded:
        raise LoopError("facial lassos are defined for bounded faces only")
    return f


def default_base(g: EmbeddedGraph, face) -> int:
    f = _face(g, face)
    return min(g.boundary_vertices(f), key=lambda v: g.vertex_ids[v])


def facial_loop(g: EmbeddedGraph, face, base: int | None = None, clockwise: bool = False) -> Word:
    """The boundary cycle of a bounded face as a loop starting at ``base``."""
    f = _face(g, face)
    if base is None:
        base = default_base(g, f)
    starts = [k for k, d in enumerate(f.boundary) if g.tail(d) == base]
    if not starts:
        raise LoopError(f"vertex {base} is not on the boundary of face {f.index}")
    k = starts[0]
    c = f.boundary[k:] + f.boundary[:k]
    return inverse(c) if clockwise else c


def facial_lasso(T: SpanningTree, face, base: int | None = None, clockwise: bool = False) -> Word:
    g = T.graph
    c = facial_loop(g, face, base, clockwise)
    spoke = tree_path(T, T.root, g.tail(c[0]))
    return free_reduce(spoke + c + inverse(spoke))


@dataclass(frozen=True)
class FacialBasis:
    """Facial lassos and their relation to the lasso generators of ``T``.

    Facial letter ``f+1`` stands for the lasso of bounded face ``f`` with the
    chosen base and orientation.
    """

    tree: SpanningTree
    bases: tuple
    clockwise: tuple
    lassos: tuple               # edge words
    in_generators: tuple        # facial lasso -> generator word
    generator_in_faces: dict    # generator k -> facial word

    def to_facial(self, generator_word: Sequence[int]) -> Word:
        out: list[int] = []
        for x in generator_word:
            w = self.generator_in_faces[abs(x)]
            out.extend(w if x > 0 else inverse(w))
        return free_reduce(out)

    def loop_to_facial(self, loop: Sequence[int]) -> Word:
        return self.to_facial(loop_to_generator_word(loop, self.tree))

    def expand(self, facial_word: Sequence[int]) -> Word:
        """Edge word of a product of facial lassos."""
        out: list[int] = []
        for x in facial_word:
            w = self.lassos[abs(x) - 1]
            out.extend(w if x > 0 else inverse(w))
        return free_reduce(out)


def _norm_choices(g, bases, clockwise):
    nb = len(g.bounded_faces)
    if bases is None:
        bases = [None] * nb
    elif isinstance(bases, Mapping):
        bases = [bases.get(f) for f in range(nb)]
    bases = [default_base(g, f) if b is None else int(b) for f, b in enumerate(bases)]
    if len(bases) != nb:
        raise LoopError(f"expected {nb} base choices")
    if clockwise is None:
        clockwise = [False] * nb
    elif isinstance(clockwise, Mapping):
        clockwise = [bool(clockwise.get(f, False)) for f in range(nb)]
    clockwise = [bool(c) for c in clockwise]
    if len(clockwise) != nb:
        raise LoopError(f"expected {nb} orientation choices")
    return tuple(bases), tuple(clockwise)


def facial_basis_change(g: EmbeddedGraph, T: SpanningTree, bases=None, clockwise=None) -> FacialBasis:
    """Express every lasso generator as a word in facial lassos.

    Faces are handled deepest-first in the dual tree, so the facial word of a
    face involves its parent generator once and otherwise only generators
    already solved.
    """
    from .graph import cotree_parent_map

    bases, clockwise = _norm_choices(g, bases, clockwise)
    gens = generator_edges(T)
    number = {e: k + 1 for k, e in enumerate(gens)}
    cot = cotree_parent_map(g, T)
    lassos = tuple(facial_lasso(T, f, bases[f], clockwise[f]) for f in range(len(g.bounded_faces)))
    in_gens = tuple(loop_to_generator_word(w, T) for w in lassos)
    solved: dict[int, Word] = {}

    def subst(word):
        out = []
        for x in word:
            w = solved[abs(x)]
            out.extend(w if x > 0 else inverse(w))
        return out

    for f in cot.order:
        p = number[cot.parent_edge[f]]
        word = in_gens[f]
        hits = [k for k, x in enumerate(word) if abs(x) == p]
        others = {abs(x) for x in word if abs(x) != p}
        if len(hits) != 1 or not others <= solved.keys():
            raise AssertionError(f"elimination failed at face {f}")
        k = hits[0]
        A, s, B = word[:k], word[k], word[k + 1:]
        core = free_reduce(inverse(subst(A)) + (f + 1,) + inverse(subst(B)))
        solved[p] = core if s > 0 else inverse(core)
    basis = FacialBasis(T, bases, clockwise, lassos, in_gens, solved)
    for f, w in enumerate(in_gens):
        if basis.to_facial(w) != (f + 1,):
            raise AssertionError(f"basis change does not reproduce facial lasso {f}")
    return basis


def outer_loop(g: EmbeddedGraph, base: int) -> Word:
    """The anticlockwise loop around the unbounded face, starting at ``base``."""
    walk = inverse(g.outer_face.boundary)
    starts = [k for k, d in enumerate(walk) if g.tail(d) == base]
    if not starts:
        raise LoopError(f"vertex {base} is not on the boundary of the unbounded face")
    k = starts[0]
    return walk[k:] + walk[:k]


@dataclass(frozen=True)
class BoundaryOrder:
    """``l_inf = l_{sigma(n)}^{eps(n)} ... l_{sigma(1)}^{eps(1)}`` (faces 0-based)."""

    sigma: tuple
    eps: tuple
    word: Word  # facial word of l_inf in path order


def boundary_order(g: EmbeddedGraph, T: SpanningTree, bases=None, clockwise=None) -> BoundaryOrder:
    l_inf = outer_loop(g, T.root)
    basis = facial_basis_change(g, T, bases, clockwise)
    w = basis.loop_to_facial(l_inf)
    n = len(g.bounded_faces)
    if len(w) != n or sorted(abs(x) for x in w) != list(range(1, n + 1)):
        raise AssertionError(f"outer loop is not an ordered product of facial lassos: {w}")
    sigma = tuple(abs(x) - 1 for x in reversed(w))
    eps = tuple(1 if x > 0 else -1 for x in reversed(w))
    return BoundaryOrder(sigma, eps, w)


def adapted_tree(g: EmbeddedGraph, loop1: Sequence[int], loop2: Sequence[int], root: int) -> SpanningTree:
    """A spanning tree containing all but the last edge of each of two simple loops.

    Remaining edges are added in breadth-first discovery order from ``root``.
    """
    parent = list(range(g.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []

    def add(i):
        a, b = find(g.edges[i].tail), find(g.edges[i].head)
        if a != b:
            parent[a] = b
            chosen.append(i)
            return True
        return False

    for loop in (loop1, loop2):
        if not loop or not is_loop(g, loop):
            raise LoopError("adapted trees need two non-empty loops")
        for d in loop[:-1]:
            if not add(edge_index(d)):
                raise LoopError("loops are not simple or share a cycle")
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for d in sorted(g.rotation[v], key=edge_index):
            add(edge_index(d))
            if g.head(d) not in seen:
                seen.add(g.head(d))
                queue.append(g.head(d))
    return tree_from_edges(g, chosen, root)


# -- lattice lassos -------------------------------------------------------------

def _grid_shape(g: EmbeddedGraph):
    if not g.grid:
        raise LoopError("graph is not a grid")
    return g.grid["shape"]


def grid_cell_boundary(g: EmbeddedGraph, i: int, j: int) -> Word:
    r, u = "r", "u"
    return (grid_dart(g, r, i, j), grid_dart(g, u, i + 1, j),
            grid_dart(g, r, i, j + 1, -1), grid_dart(g, u, i, j, -1))


def grid_spoke(g: EmbeddedGraph, i: int, j: int) -> Word:
    """``(0,0) -> (i,0) -> (i,j)`` along the lattice."""
    return (tuple(grid_dart(g, "r", k, 0) for k in range(i))
            + tuple(grid_dart(g, "u", i, k) for k in range(j)))


def grid_lasso(g: EmbeddedGraph, i: int, j: int) -> Word:
    w, h = _grid_shape(g)
    if not (0 <= i < w and 0 <= j < h):
        raise LoopError(f"L({i},{j}) outside a {w}x{h} grid")
    p = grid_spoke(g, i, j)
    return free_reduce(p + grid_cell_boundary(g, i, j) + inverse(p))


def strip_lasso(g: EmbeddedGraph, s: int, t: int) -> Word:
    """``L_s^t``: the lasso around the bottom-row rectangle ``[s, t] x [0, 1]``."""
    w, h = _grid_shape(g)
    if not (0 <= s < t <= w):
        raise LoopError(f"strip lasso needs 0 <= s < t <= {w}, got s={s}, t={t}")
    p = grid_spoke(g, s, 0)
    c = (tuple(grid_dart(g, "r", k, 0) for k in range(s, t))
         + (grid_dart(g, "u", t, 0),)
         + tuple(grid_dart(g, "r", k, 1, -1) for k in range(t - 1, s - 1, -1))
         + (grid_dart(g, "u", s, 0, -1),))
    return free_reduce(p + c + inverse(p))


def grid_origin(g: EmbeddedGraph) -> int:
    return grid_vertex(g, 0, 0)
