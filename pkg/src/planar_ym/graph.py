"""Embedded planar graphs with polyline edges.

Edges are stored once, with a positive orientation ``tail -> head``.  An
oriented edge (a *dart*) is a signed integer: ``+(i+1)`` traverses edge ``i``
forwards and ``-(i+1)`` backwards, so inverting a dart is negation and a path
is a tuple of darts.

Faces are traced with the rule ``next(d) = clockwise successor of -d around
head(d)``, which keeps the face on the left of every dart: bounded faces come
out anticlockwise and the unbounded face clockwise.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np


class GraphError(ValueError):
    pass


def edge_index(d: int) -> int:
    return abs(d) - 1


def dart(i: int, sign: int = 1) -> int:
    return (i + 1) if sign > 0 else -(i + 1)


@dataclass(frozen=True, eq=False)
class Edge:
    tail: int
    head: int
    polyline: np.ndarray
    eid: int


@dataclass(frozen=True)
class Face:
    index: int
    boundary: tuple[int, ...]
    bounded: bool
    signed_area: float
    key: str


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a, b, p) -> bool:
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _segments_touch(a, b, c, d) -> bool:
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return ((o1 == 0 and _on_segment(a, b, c)) or (o2 == 0 and _on_segment(a, b, d))
            or (o3 == 0 and _on_segment(c, d, a)) or (o4 == 0 and _on_segment(c, d, b)))


def shoelace(points: np.ndarray) -> float:
    x, y = points[:, 0], points[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


class EmbeddedGraph:
    """A connected planar graph embedded with straight or polyline edges.

    Parameters
    ----------
    vertices : sequence of ``(id, x, y)``
    edges : sequence of ``(eid, tail_id, head_id, polyline)``; ``eid`` must be a
        positive integer and ``polyline`` may be ``None`` for a straight edge.
    areas : optional mapping from face key to an abstract area.  Faces missing
        from the mapping use their Lebesgue area.
    """

    def __init__(self, vertices, edges, areas: Mapping[str, float] | None = None, grid=None):
        self.vertex_ids = tuple(v[0] for v in vertices)
        if len(set(self.vertex_ids)) != len(self.vertex_ids):
            raise GraphError("duplicate vertex id")
        self._vindex = {vid: k for k, vid in enumerate(self.vertex_ids)}
        self.coords = np.array([[float(v[1]), float(v[2])] for v in vertices]).reshape(-1, 2)
        self.coords.setflags(write=False)
        if len({tuple(c) for c in self.coords}) != len(self.coords):
            raise GraphError("two vertices share a position")
        built = []
        for eid, t, h, poly in edges:
            if not isinstance(eid, (int, np.integer)) or int(eid) <= 0:
                raise GraphError(f"edge id {eid!r} must be a positive integer")
            if t not in self._vindex or h not in self._vindex:
                raise GraphError(f"edge {eid} references an unknown vertex")
            ti, hi = self._vindex[t], self._vindex[h]
            pts = (np.array([self.coords[ti], self.coords[hi]]) if poly is None
                   else np.asarray(poly, dtype=float).reshape(-1, 2))
            if len(pts) < 2:
                raise GraphError(f"edge {eid} needs at least two points")
            if not (np.array_equal(pts[0], self.coords[ti]) and np.array_equal(pts[-1], self.coords[hi])):
                raise GraphError(f"edge {eid} polyline does not join its endpoints")
            if np.any(np.all(np.diff(pts, axis=0) == 0, axis=1)):
                raise GraphError(f"edge {eid} has repeated consecutive points")
            if ti == hi and len(pts) < 4:
                raise GraphError(f"loop edge {eid} needs at least three segments")
            pts.setflags(write=False)
            built.append(Edge(ti, hi, pts, int(eid)))
        self.edges = tuple(built)
        if len({e.eid for e in self.edges}) != len(self.edges):
            raise GraphError("duplicate edge id")
        self._eindex = {e.eid: i for i, e in enumerate(self.edges)}
        self.grid = grid
        self._check_connected()
        self._check_simple()
        self._build_rotation()
        self._trace_faces()
        self.areas = dict(areas or {})
        unknown = set(self.areas) - {f.key for f in self.faces}
        if unknown:
            raise GraphError(f"area given for unknown face(s) {sorted(unknown)}")
        for k, a in self.areas.items():
            if not a > 0:
                raise GraphError(f"area of face {k} must be positive, got {a!r}")
        if len(self.edges) - len(self.coords) + 1 != len(self.bounded_faces):
            raise GraphError("Euler relation #E - #V + 1 = #bounded faces fails")

    # -- basic incidence -----------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.vertex_ids)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def vertex(self, vid) -> int:
        try:
            return self._vindex[vid]
        except KeyError:
            raise GraphError(f"vertex {vid!r} not in graph") from None

    def edge_by_id(self, eid: int) -> int:
        try:
            return self._eindex[eid]
        except KeyError:
            raise GraphError(f"edge id {eid!r} not in graph") from None

    def darts(self) -> list[int]:
        return [s * (i + 1) for i in range(self.n_edges) for s in (1, -1)]

    def tail(self, d: int) -> int:
        e = self.edges[edge_index(d)]
        return e.tail if d > 0 else e.head

    def head(self, d: int) -> int:
        e = self.edges[edge_index(d)]
        return e.head if d > 0 else e.tail

    def dart_points(self, d: int) -> np.ndarray:
        pts = self.edges[edge_index(d)].polyline
        return pts if d > 0 else pts[::-1]

    def external_dart(self, d: int) -> int:
        return int(math.copysign(self.edges[edge_index(d)].eid, d))

    def internal_dart(self, signed_eid: int) -> int:
        return int(math.copysign(self.edge_by_id(abs(signed_eid)) + 1, signed_eid))

    def check_path(self, word: Sequence[int], start: int | None = None) -> None:
        """Raise unless consecutive darts concatenate (and start at ``start`` if given)."""
        for d in word:
            if d == 0 or abs(d) > self.n_edges:
                raise GraphError(f"dart {d} not in graph")
        if word and start is not None and self.tail(word[0]) != start:
            raise GraphError("path does not start at the requested vertex")
        for a, b in zip(word, word[1:]):
            if self.head(a) != self.tail(b):
                raise GraphError(f"darts {a} and {b} do not concatenate")

    def path_points(self, word: Sequence[int]) -> np.ndarray:
        if not word:
            raise GraphError("empty path has no geometry")
        pts = [self.dart_points(word[0])]
        for d in word[1:]:
            pts.append(self.dart_points(d)[1:])
        return np.concatenate(pts)

    # -- validation ----------------------------------------------------------
    def _check_connected(self) -> None:
        if self.n_vertices == 0:
            raise GraphError("graph has no vertices")
        adj = [[] for _ in range(self.n_vertices)]
        for e in self.edges:
            adj[e.tail].append(e.head)
            adj[e.head].append(e.tail)
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != self.n_vertices:
            raise GraphError("graph is disconnected")

    def _check_simple(self) -> None:
        """Edges may meet only at common endpoints that are vertices."""
        vertex_pts = {tuple(c) for c in self.coords}
        segs = []
        for i, e in enumerate(self.edges):
            for p in e.polyline[1:-1]:
                if tuple(p) in vertex_pts:
                    raise GraphError(f"edge {e.eid} passes through a vertex")
            for k in range(len(e.polyline) - 1):
                segs.append((i, k, e.polyline[k], e.polyline[k + 1]))
        if len(segs) < 2:
            return
        A = np.array([s[2] for s in segs])
        B = np.array([s[3] for s in segs])
        # vectorised bounding-box prefilter
        lo = np.minimum(A, B)
        hi = np.maximum(A, B)
        overlap = ((lo[:, None, 0] <= hi[None, :, 0]) & (lo[None, :, 0] <= hi[:, None, 0])
                   & (lo[:, None, 1] <= hi[None, :, 1]) & (lo[None, :, 1] <= hi[:, None, 1]))
        I, J = np.nonzero(np.triu(overlap, k=1))
        for a, b in zip(I.tolist(), J.tolist()):
            ea, ka, pa, qa = segs[a]
            eb, kb, pb, qb = segs[b]
            if not _segments_touch(pa, qa, pb, qb):
                continue
            shared = [p for p in (pa, qa) for q in (pb, qb) if np.array_equal(p, q)]
            if len(shared) != 1:
                raise GraphError(f"edges {self.edges[ea].eid} and {self.edges[eb].eid} overlap")
            p = shared[0]
            if _orient(pa, qa, pb) == 0 and _orient(pa, qa, qb) == 0:
                ra = qa - pa if np.array_equal(p, pa) else pa - qa
                rb = qb - pb if np.array_equal(p, pb) else pb - qb
                if np.dot(ra, rb) > 0:
                    raise GraphError(f"edges {self.edges[ea].eid} and {self.edges[eb].eid} overlap")
            p = tuple(p)
            if ea == eb:
                nseg = len(self.edges[ea].polyline) - 1
                adjacent = abs(ka - kb) == 1 or (self.edges[ea].tail == self.edges[ea].head
                                                  and {ka, kb} == {0, nseg - 1})
                if adjacent:
                    continue
            elif p in vertex_pts:
                continue
            raise GraphError(f"edges {self.edges[ea].eid} and {self.edges[eb].eid} cross")

    # -- rotation system and faces --------------------------------------------
    def _build_rotation(self) -> None:
        out = [[] for _ in range(self.n_vertices)]
        for d in self.darts():
            pts = self.dart_points(d)
            v = pts[1] - pts[0]
            out[self.tail(d)].append((math.atan2(v[1], v[0]), d))
        self.rotation: list[tuple[int, ...]] = []
        self._pos: dict[int, int] = {}
        for v, items in enumerate(out):
            items.sort()
            angles = [a for a, _ in items]
            if len(set(angles)) != len(angles):
                raise GraphError(f"two edges leave vertex {self.vertex_ids[v]} in the same direction")
            rot = tuple(d for _, d in items)
            self.rotation.append(rot)
            for k, d in enumerate(rot):
                self._pos[d] = k

    def next_dart(self, d: int) -> int:
        """The dart following ``d`` along the face on the left of ``d``."""
        twin = -d
        rot = self.rotation[self.head(d)]
        return rot[(self._pos[twin] - 1) % len(rot)]

    def _face_key(self, boundary: Sequence[int]) -> str:
        ext = [self.external_dart(d) for d in boundary]
        best = min(ext[k:] + ext[:k] for k in range(len(ext)))
        return ",".join(str(x) for x in best)

    def _trace_faces(self) -> None:
        seen: set[int] = set()
        raw = []
        for d0 in self.darts():
            if d0 in seen:
                continue
            cycle = []
            d = d0
            while d not in seen:
                seen.add(d)
                cycle.append(d)
                d = self.next_dart(d)
            if d != d0:
                raise GraphError("face tracing did not close up")
            area = shoelace(self.path_points(cycle)[:-1])
            raw.append((cycle, area))
        if not raw:  # single isolated vertex
            raw.append(((), 0.0))
        unbounded = min(range(len(raw)), key=lambda k: raw[k][1])
        for k, (_, a) in enumerate(raw):
            if k != unbounded and not a > 0:
                raise GraphError("a bounded face has non-positive signed area")
        faces = []
        for k, (cycle, area) in enumerate(raw):
            key = self._face_key(cycle) if cycle else "outer"
            if cycle:
                ext = [self.external_dart(d) for d in cycle]
                rots = [ext[j:] + ext[:j] for j in range(len(ext))]
                j = rots.index(min(rots))
                cycle = cycle[j:] + cycle[:j]
            pts = self.path_points(cycle)[:-1] if cycle else np.zeros((1, 2))
            cx, cy = pts.mean(axis=0)
            faces.append((k != unbounded, round(float(cy), 9), round(float(cx), 9), key,
                          tuple(cycle), area))
        bounded = sorted((f for f in faces if f[0]), key=lambda f: (f[1], f[2], f[3]))
        outer = [f for f in faces if not f[0]]
        self.faces: list[Face] = []
        for idx, f in enumerate(bounded + outer):
            self.faces.append(Face(idx, f[4], f[0], f[5], f[3]))
        self.bounded_faces = [f for f in self.faces if f.bounded]
        self.outer_face = self.faces[-1]
        self.face_of_dart = {d: f.index for f in self.faces for d in f.boundary}
        self._face_by_key = {f.key: f.index for f in self.faces}

    def face_by_key(self, key: str) -> Face:
        try:
            return self.faces[self._face_by_key[key]]
        except KeyError:
            raise GraphError(f"no face with key {key!r}") from None

    def boundary_vertices(self, face: Face | int) -> list[int]:
        f = self.faces[face] if isinstance(face, int) else face
        return [self.tail(d) for d in f.boundary]

    # -- areas ------------------------------------------------------------------
    def face_areas(self, areas=None) -> np.ndarray:
        """Area of each bounded face, in bounded-face order.

        ``areas`` may be a sequence (bounded-face order), a mapping from face
        key or index to area, or ``None`` for the graph's own areas.
        """
        nb = len(self.bounded_faces)
        if areas is None:
            out = np.array([self.areas.get(f.key, f.signed_area) for f in self.bounded_faces])
        elif isinstance(areas, Mapping):
            out = np.array([self.areas.get(f.key, f.signed_area) for f in self.bounded_faces])
            for k, a in areas.items():
                idx = k if isinstance(k, (int, np.integer)) else self.face_by_key(k).index
                if not 0 <= idx < nb:
                    raise GraphError(f"face {k!r} is not bounded")
                out[idx] = float(a)
        else:
            out = np.asarray(areas, dtype=float).reshape(-1)
            if out.shape != (nb,):
                raise GraphError(f"expected {nb} face areas, got {out.size}")
        if not np.all(out > 0) or not np.all(np.isfinite(out)):
            raise GraphError("face areas must be finite and strictly positive")
        return out

    # -- serialisation -----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": [{"id": vid, "x": float(x), "y": float(y)}
                         for vid, (x, y) in zip(self.vertex_ids, self.coords)],
            "edges": [{"id": e.eid, "tail": self.vertex_ids[e.tail], "head": self.vertex_ids[e.head],
                       "polyline": e.polyline.tolist()} for e in self.edges],
            "areas": {k: float(a) for k, a in sorted(self.areas.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "EmbeddedGraph":
        try:
            vertices = [(v["id"], v["x"], v["y"]) for v in data["vertices"]]
            edges = [(e["id"], e["tail"], e["head"], e.get("polyline")) for e in data["edges"]]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph file: missing {exc}") from None
        return cls(vertices, edges, data.get("areas") or None)

    def __repr__(self) -> str:
        return (f"EmbeddedGraph(V={self.n_vertices}, E={self.n_edges}, "
                f"bounded faces={len(self.bounded_faces)})")


# -- constructors ------------------------------------------------------------------

def build_grid(w: int, h: int) -> EmbeddedGraph:
    """The part of the lattice N^2 inside ``[0, w] x [0, h]``.

    Vertex ``(i, j)`` has id ``j*(w+1) + i``; horizontal edges point right and
    vertical edges point up.  ``g.grid["r", i, j]`` / ``g.grid["u", i, j]`` give
    edge indices of the unit edges leaving ``(i, j)``.
    """
    if w < 1 or h < 1:
        raise GraphError("grid dimensions must be at least 1")
    vid = lambda i, j: j * (w + 1) + i  # noqa: E731
    vertices = [(vid(i, j), i, j) for j in range(h + 1) for i in range(w + 1)]
    edges, names = [], {}
    for j in range(h + 1):
        for i in range(w):
            names["r", i, j] = len(edges)
            edges.append((len(edges) + 1, vid(i, j), vid(i + 1, j), None))
    for j in range(h):
        for i in range(w + 1):
            names["u", i, j] = len(edges)
            edges.append((len(edges) + 1, vid(i, j), vid(i, j + 1), None))
    names["shape"] = (w, h)
    return EmbeddedGraph(vertices, edges, grid=names)


def grid_dart(g: EmbeddedGraph, kind: str, i: int, j: int, sign: int = 1) -> int:
    if not g.grid or (kind, i, j) not in g.grid:
        raise GraphError(f"no grid edge {kind}{(i, j)}")
    return dart(g.grid[kind, i, j], sign)


def grid_vertex(g: EmbeddedGraph, i: int, j: int) -> int:
    w, h = g.grid["shape"]
    if not (0 <= i <= w and 0 <= j <= h):
        raise GraphError(f"({i}, {j}) outside the grid")
    return g.vertex(j * (w + 1) + i)


def grid_face(g: EmbeddedGraph, i: int, j: int) -> Face:
    """The bounded face ``[i, i+1] x [j, j+1]`` of a grid graph."""
    w, h = g.grid["shape"]
    if not (0 <= i < w and 0 <= j < h):
        raise GraphError(f"cell ({i}, {j}) outside the grid")
    return g.faces[g.face_of_dart[grid_dart(g, "r", i, j)]]


# -- spanning trees ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpanningTree:
    graph: EmbeddedGraph
    root: int
    tree_edges: frozenset
    parent_dart: dict = field(repr=False)
    depth: dict = field(repr=False)

    def contains(self, d: int) -> bool:
        return edge_index(d) in self.tree_edges

    def non_tree_edges(self) -> list[int]:
        return [i for i in range(self.graph.n_edges) if i not in self.tree_edges]

    def rerooted(self, root: int) -> "SpanningTree":
        return tree_from_edges(self.graph, self.tree_edges, root)


def tree_from_edges(g: EmbeddedGraph, edges: Iterable[int], root: int) -> SpanningTree:
    """Validate an edge set as a spanning tree and root it."""
    edges = frozenset(int(i) for i in edges)
    if any(not 0 <= i < g.n_edges for i in edges):
        raise GraphError("tree edge out of range")
    if not 0 <= root < g.n_vertices:
        raise GraphError(f"root {root} not in graph")
    if len(edges) != g.n_vertices - 1:
        raise GraphError("a spanning tree has #V - 1 edges")
    adj = [[] for _ in range(g.n_vertices)]
    for i in sorted(edges):
        e = g.edges[i]
        if e.tail == e.head:
            raise GraphError("a loop edge cannot be a tree edge")
        adj[e.tail].append(dart(i, 1))
        adj[e.head].append(dart(i, -1))
    parent = {root: None}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for d in adj[v]:
            w = g.head(d)
            if w in parent:
                continue
            parent[w] = d
            depth[w] = depth[v] + 1
            queue.append(w)
    if len(parent) != g.n_vertices:
        raise GraphError("edge set does not span the graph (or contains a cycle)")
    return SpanningTree(g, root, edges, parent, depth)


def spanning_tree(g: EmbeddedGraph, root: int = 0, policy: str = "bfs",
                  edges: Iterable[int] | None = None, order: Sequence[int] | None = None) -> SpanningTree:
    """Breadth-first tree from ``root`` (neighbours scanned by ``order`` of edge
    indices, default increasing), or an ``explicit`` edge set."""
    if policy == "explicit":
        if edges is None:
            raise GraphError("explicit policy needs an edge set")
        return tree_from_edges(g, edges, root)
    if policy != "bfs":
        raise GraphError(f"unknown tree policy {policy!r}")
    if not 0 <= root < g.n_vertices:
        raise GraphError(f"root {root} not in graph")
    rank = {i: k for k, i in enumerate(order if order is not None else range(g.n_edges))}
    seen = {root}
    chosen = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        outs = sorted((d for d in g.rotation[v]), key=lambda d: rank[edge_index(d)])
        for d in outs:
            w = g.head(d)
            if w not in seen:
                seen.add(w)
                chosen.append(edge_index(d))
                queue.append(w)
    return tree_from_edges(g, chosen, root)


def all_spanning_trees(g: EmbeddedGraph, root: int = 0, limit: int = 100000) -> list[SpanningTree]:
    """Every spanning tree, by filtering (#V-1)-subsets of non-loop edges."""
    candidates = [i for i, e in enumerate(g.edges) if e.tail != e.head]
    k = g.n_vertices - 1
    if math.comb(len(candidates), k) > limit:
        raise GraphError("too many edge subsets to enumerate spanning trees")
    trees = []
    for subset in itertools.combinations(candidates, k):
        parent = list(range(g.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for i in subset:
            a, b = find(g.edges[i].tail), find(g.edges[i].head)
            if a == b:
                ok = False
                break
            parent[a] = b
        if ok:
            trees.append(tree_from_edges(g, subset, root))
    return trees


def grid_comb_tree(g: EmbeddedGraph) -> SpanningTree:
    """All vertical edges plus the bottom row, rooted at the origin."""
    w, h = g.grid["shape"]
    edges = [g.grid["u", i, j] for i in range(w + 1) for j in range(h)]
    edges += [g.grid["r", i, 0] for i in range(w)]
    return tree_from_edges(g, edges, grid_vertex(g, 0, 0))


def tree_path(T: SpanningTree, u: int, w: int) -> tuple[int, ...]:
    """The unique injective path in ``T`` from vertex ``u`` to vertex ``w``."""
    g = T.graph
    if not (0 <= u < g.n_vertices and 0 <= w < g.n_vertices):
        raise GraphError("vertex not in graph")
    up, down = [], []
    a, b = u, w
    while T.depth[a] > T.depth[b]:
        up.append(-T.parent_dart[a])
        a = g.tail(T.parent_dart[a])
    while T.depth[b] > T.depth[a]:
        down.append(T.parent_dart[b])
        b = g.tail(T.parent_dart[b])
    while a != b:
        up.append(-T.parent_dart[a])
        a = g.tail(T.parent_dart[a])
        down.append(T.parent_dart[b])
        b = g.tail(T.parent_dart[b])
    return tuple(up + down[::-1])


# -- tree / cotree duality -------------------------------------------------------------

@dataclass(frozen=True)
class CotreeMap:
    """Each bounded face paired with the non-tree edge leading towards the outer face."""

    parent_edge: dict
    parent_face: dict
    depth: dict
    order: tuple  # deepest faces first


def cotree_parent_map(g: EmbeddedGraph, T: SpanningTree) -> CotreeMap:
    non_tree = T.non_tree_edges()
    nb = len(g.bounded_faces)
    if len(non_tree) != nb:
        raise AssertionError("non-tree edges and bounded faces are not in bijection")
    adj = {f.index: [] for f in g.faces}
    for i in non_tree:
        a, b = g.face_of_dart[dart(i, 1)], g.face_of_dart[dart(i, -1)]
        if a == b:
            raise AssertionError("non-tree edge with the same face on both sides")
        adj[a].append((i, b))
        adj[b].append((i, a))
    root = g.outer_face.index
    parent_edge, parent_face, depth = {}, {}, {root: 0}
    queue = deque([root])
    while queue:
        f = queue.popleft()
        for i, other in adj[f]:
            if other in depth:
                continue
            depth[other] = depth[f] + 1
            parent_edge[other] = i
            parent_face[other] = f
            queue.append(other)
    if len(parent_edge) != nb or len(set(parent_edge.values())) != nb:
        raise AssertionError("dual of the cotree is not a spanning tree of the faces")
    order = tuple(sorted(parent_edge, key=lambda f: (-depth[f], f)))
    return CotreeMap(parent_edge, parent_face, {f: depth[f] for f in parent_edge}, order)


# -- refinement moves -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Refinement:
    """Result of a local move.

    ``coarse_to_fine`` sends every dart of the coarser of the two graphs to
    the word of darts of the finer graph tracing the same curve.  ``finer`` is
    True when the new graph is the finer one.
    """

    graph: EmbeddedGraph
    coarse_to_fine: dict
    finer: bool


def _vertex_list(g: EmbeddedGraph):
    return [(vid, float(x), float(y)) for vid, (x, y) in zip(g.vertex_ids, g.coords)]


def _edge_list(g: EmbeddedGraph):
    return [(e.eid, g.vertex_ids[e.tail], g.vertex_ids[e.head], e.polyline) for e in g.edges]


def _new_id(ids) -> int:
    ints = [i for i in ids if isinstance(i, (int, np.integer))]
    return (max(ints) + 1) if ints else len(ids)


def _uses_abstract_areas(g: EmbeddedGraph) -> bool:
    return bool(g.areas)


def _carry_areas(old: EmbeddedGraph, new_vertices, new_edges, origin, overrides=None, grid=None):
    """Rebuild a graph and transport face areas through ``origin`` (new dart -> old dart)."""
    probe = EmbeddedGraph(new_vertices, new_edges)
    if not _uses_abstract_areas(old) and not overrides:
        return probe
    old_areas = old.face_areas()
    areas = {}
    for f in probe.bounded_faces:
        if overrides and f.index in overrides(probe):
            areas[f.key] = overrides(probe)[f.index]
            continue
        sources = {old.face_of_dart[origin[d]] for d in f.boundary if d in origin}
        total = 0.0
        for s in sources:
            if old.faces[s].bounded:
                total += old_areas[s]
        areas[f.key] = total
    return EmbeddedGraph(new_vertices, new_edges, areas, grid=grid)


def subdivide_edge(g: EmbeddedGraph, edge: int, point) -> Refinement:
    """Insert a degree-two vertex at ``point`` on edge index ``edge``."""
    if not 0 <= edge < g.n_edges:
        raise GraphError(f"edge {edge} not in graph")
    p = np.asarray(point, dtype=float)
    e = g.edges[edge]
    pts = e.polyline
    split = None
    for k in range(len(pts) - 1):
        a, b = pts[k], pts[k + 1]
        if _orient(a, b, p) == 0 and _on_segment(a, b, p):
            if np.array_equal(p, a) and k == 0 or np.array_equal(p, b) and k == len(pts) - 2:
                raise GraphError("subdivision point is an endpoint of the edge")
            split = k
            break
    if split is None:
        raise GraphError("subdivision point is not on the edge")
    first = np.vstack([pts[:split + 1], p])
    second = np.vstack([p, pts[split + 1:]])
    first = first[np.r_[True, np.any(np.diff(first, axis=0) != 0, axis=1)]]
    second = second[np.r_[True, np.any(np.diff(second, axis=0) != 0, axis=1)]]
    vid = _new_id(g.vertex_ids)
    eid = _new_id([x.eid for x in g.edges])
    vertices = _vertex_list(g) + [(vid, float(p[0]), float(p[1]))]
    edges = _edge_list(g)
    edges[edge] = (e.eid, g.vertex_ids[e.tail], vid, first)
    edges.append((eid, vid, g.vertex_ids[e.head], second))
    new = len(edges) - 1
    origin = {d: d for d in g.darts()}
    origin[dart(new, 1)] = dart(edge, 1)
    origin[dart(new, -1)] = dart(edge, -1)
    graph = _carry_areas(g, vertices, edges, origin)
    c2f = {d: (d,) for d in g.darts()}
    c2f[dart(edge, 1)] = (dart(edge, 1), dart(new, 1))
    c2f[dart(edge, -1)] = (dart(new, -1), dart(edge, -1))
    return Refinement(graph, c2f, True)


def split_face(g: EmbeddedGraph, face: int, u: int, w: int, via=(), areas=None) -> Refinement:
    """Add a chord from vertex ``u`` to vertex ``w`` through the interior of a bounded face.

    ``areas = (a, b)`` assigns ``a`` to the new face on the left of the chord
    (oriented ``u -> w``) and ``b`` to the one on its right; they must add up
    to the area of the split face.
    """
    if not 0 <= face < len(g.bounded_faces):
        raise GraphError(f"face {face} is not a bounded face")
    F = g.faces[face]
    on_boundary = set(g.boundary_vertices(F))
    if u not in on_boundary or w not in on_boundary:
        raise GraphError("chord endpoints must lie on the face boundary")
    via = [tuple(map(float, p)) for p in via]
    if u == w and len(via) < 2:
        raise GraphError("a chord closing on itself needs at least two interior points")
    poly = np.array([g.coords[u], *via, g.coords[w]], dtype=float)
    eid = _new_id([x.eid for x in g.edges])
    edges = _edge_list(g) + [(eid, g.vertex_ids[u], g.vertex_ids[w], poly)]
    chord = len(edges) - 1
    origin = {d: d for d in g.darts()}
    try:
        probe = EmbeddedGraph(_vertex_list(g), edges)
    except GraphError as exc:
        raise GraphError(f"illegal chord: {exc}") from None
    left = probe.face_of_dart[dart(chord, 1)]
    right = probe.face_of_dart[dart(chord, -1)]
    for side in (left, right):
        srcs = {g.face_of_dart[origin[d]] for d in probe.faces[side].boundary if d in origin}
        if srcs != {face}:
            raise GraphError("chord does not run through the interior of the face")
    if areas is not None:
        a, b = float(areas[0]), float(areas[1])
        total = g.face_areas()[face]
        if not (a > 0 and b > 0) or abs(a + b - total) > 1e-12 * max(1.0, total):
            raise GraphError(f"split areas {a}, {b} must be positive and add up to {total}")

        def overrides(pg):
            return {pg.face_of_dart[dart(chord, 1)]: a, pg.face_of_dart[dart(chord, -1)]: b}
    else:
        overrides = None
    if areas is None and not _uses_abstract_areas(g):
        graph = probe
    else:
        if areas is None:
            raise GraphError("a graph with abstract areas needs explicit split areas")
        graph = _carry_areas(g, _vertex_list(g), edges, origin, overrides)
    return Refinement(graph, {d: (d,) for d in g.darts()}, True)


def remove_degree2_vertex(g: EmbeddedGraph, v: int) -> Refinement:
    """Merge the two edges at a degree-two vertex into one."""
    if not 0 <= v < g.n_vertices:
        raise GraphError(f"vertex {v} not in graph")
    outs = g.rotation[v]
    if len(outs) != 2 or edge_index(outs[0]) == edge_index(outs[1]):
        raise GraphError("vertex does not have degree two")
    d1, d2 = outs
    incoming = -d1  # a -> v
    a, b = g.tail(incoming), g.head(d2)
    if a == v or b == v:
        raise GraphError("vertex does not have degree two")
    poly = np.vstack([g.dart_points(incoming), g.dart_points(d2)[1:]])
    keep, drop = sorted((edge_index(d1), edge_index(d2)))
    old_edges = _edge_list(g)
    edges, index_map = [], {}
    for i, rec in enumerate(old_edges):
        if i == drop:
            continue
        index_map[i] = len(edges)
        if i == keep:
            rec = (rec[0], g.vertex_ids[a], g.vertex_ids[b], poly)
        edges.append(rec)
    vertices = [rec for k, rec in enumerate(_vertex_list(g)) if k != v]
    merged = index_map[keep]
    c2f = {}
    origin = {}
    for i, j in index_map.items():
        if i == keep:
            continue
        c2f[dart(j, 1)] = (dart(i, 1),)
        c2f[dart(j, -1)] = (dart(i, -1),)
        origin[dart(j, 1)] = dart(i, 1)
        origin[dart(j, -1)] = dart(i, -1)
    c2f[dart(merged, 1)] = (incoming, d2)
    c2f[dart(merged, -1)] = (-d2, -incoming)
    origin[dart(merged, 1)] = incoming
    origin[dart(merged, -1)] = -incoming
    graph = _carry_areas(g, vertices, edges, origin)
    return Refinement(graph, c2f, False)


def remove_edge_merge_faces(g: EmbeddedGraph, edge: int) -> Refinement:
    """Delete a non-bridge edge, merging the two faces it separates."""
    if not 0 <= edge < g.n_edges:
        raise GraphError(f"edge {edge} not in graph")
    if g.face_of_dart[dart(edge, 1)] == g.face_of_dart[dart(edge, -1)]:
        raise GraphError("edge is a bridge: removing it would disconnect the graph")
    edges, c2f, origin = [], {}, {}
    for i, rec in enumerate(_edge_list(g)):
        if i == edge:
            continue
        j = len(edges)
        edges.append(rec)
        for s in (1, -1):
            c2f[dart(j, s)] = (dart(i, s),)
            origin[dart(j, s)] = dart(i, s)
    graph = _carry_areas(g, _vertex_list(g), edges, origin)
    return Refinement(graph, c2f, False)


def refine(g: EmbeddedGraph, move: str, *args, **kwargs) -> Refinement:
    moves = {
        "subdivide_edge": subdivide_edge,
        "split_face": split_face,
        "remove_degree2_vertex": remove_degree2_vertex,
        "remove_edge_merge_faces": remove_edge_merge_faces,
    }
    if move not in moves:
        raise GraphError(f"unknown move {move!r}")
    return moves[move](g, *args, **kwargs)


def same_embedding(g1: EmbeddedGraph, g2: EmbeddedGraph, tol: float = 0.0) -> bool:
    """Equal vertex positions and equal edge curves (up to orientation).

    Straight-through polyline points are ignored, so a subdivided and re-merged
    edge compares equal to the original.
    """
    if sorted(map(tuple, g1.coords.tolist())) != sorted(map(tuple, g2.coords.tolist())):
        return False

    def curves(g):
        out = []
        for e in g.edges:
            pts = e.polyline
            keep = [0] + [k for k in range(1, len(pts) - 1)
                          if _orient(pts[k - 1], pts[k], pts[k + 1]) != 0
                          or np.dot(pts[k] - pts[k - 1], pts[k + 1] - pts[k]) <= 0] + [len(pts) - 1]
            p = [tuple(x) for x in pts[keep].tolist()]
            out.append(min(p, p[::-1]))
        return sorted(out)

    c1, c2 = curves(g1), curves(g2)
    if len(c1) != len(c2):
        return False
    return all(len(a) == len(b) and np.allclose(a, b, atol=tol, rtol=0) for a, b in zip(c1, c2))


def map_word(word: Sequence[int], coarse_to_fine: Mapping[int, Sequence[int]]) -> tuple[int, ...]:
    out = []
    for d in word:
        out.extend(coarse_to_fine[d])
    return tuple(out)
