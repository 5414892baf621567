"""Winding numbers of closed polylines and the abelian index field."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .graph import EmbeddedGraph, shoelace
from .levy import TWO_PI


class WindingError(ValueError):
    pass


def as_loop(points) -> np.ndarray:
    """Validate a closed polyline: first point repeated at the end, no zero-length segment."""
    p = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(p) < 2 or not np.array_equal(p[0], p[-1]):
        raise WindingError("a polyline loop must end where it starts")
    if np.any(np.all(np.diff(p, axis=0) == 0, axis=1)):
        raise WindingError("consecutive points must be distinct")
    return p


def _on_curve(p: np.ndarray, x: np.ndarray) -> bool:
    a, b = p[:-1], p[1:]
    cross = (b[:, 0] - a[:, 0]) * (x[1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (x[0] - a[:, 0])
    inside = ((np.minimum(a[:, 0], b[:, 0]) <= x[0]) & (x[0] <= np.maximum(a[:, 0], b[:, 0]))
              & (np.minimum(a[:, 1], b[:, 1]) <= x[1]) & (x[1] <= np.maximum(a[:, 1], b[:, 1])))
    return bool(np.any((cross == 0) & inside))


def winding_number(points, x) -> int:
    """Signed number of crossings of the rightward ray from ``x``.

    Each segment owns its lower endpoint only (half-open rule), so a ray
    through a vertex is counted once without perturbation.
    """
    p = as_loop(points)
    x = np.asarray(x, dtype=float)
    if _on_curve(p, x):
        raise WindingError(f"point {tuple(x)} lies on the loop")
    a, b = p[:-1], p[1:]
    cross = (b[:, 0] - a[:, 0]) * (x[1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (x[0] - a[:, 0])
    up = (a[:, 1] <= x[1]) & (b[:, 1] > x[1]) & (cross > 0)
    down = (a[:, 1] > x[1]) & (b[:, 1] <= x[1]) & (cross < 0)
    return int(up.sum() - down.sum())


def winding_by_angles(points, x) -> float:
    """Total signed turning angle of the loop seen from ``x``, divided by 2 pi."""
    p = as_loop(points) - np.asarray(x, dtype=float)
    ang = np.arctan2(p[:, 1], p[:, 0])
    d = np.diff(ang)
    d = (d + math.pi) % TWO_PI - math.pi
    return float(d.sum() / TWO_PI)


def face_interior_point(g: EmbeddedGraph, face: int) -> np.ndarray:
    """A point strictly inside a bounded face.

    Taken just left of the midpoint of a boundary segment and accepted once the
    face boundary winds once around it.
    """
    f = g.faces[face]
    if not f.bounded:
        raise WindingError("the unbounded face has no interior point")
    boundary = g.path_points(f.boundary)
    scale = float(np.ptp(boundary, axis=0).max())
    if scale == 0:
        raise WindingError("degenerate face")
    seg_a, seg_b = boundary[:-1], boundary[1:]
    for eps in (1e-3, 1e-5, 1e-7):
        for a, b in zip(seg_a, seg_b):
            v = b - a
            n = np.array([-v[1], v[0]]) / np.hypot(*v)
            x = (a + b) / 2 + eps * scale * n
            try:
                if winding_number(boundary, x) == 1 and not _near_graph(g, x):
                    return x
            except WindingError:
                continue
    raise WindingError(f"could not find an interior point of face {face}")


def _near_graph(g: EmbeddedGraph, x: np.ndarray) -> bool:
    for e in g.edges:
        if _on_curve(e.polyline, x):
            return True
    return False


def integrated_index(g: EmbeddedGraph, word: Sequence[int], areas=None) -> float:
    """``sum_F n_l(x_F) area(F)`` for a loop on the graph."""
    word = tuple(word)
    if not word:
        return 0.0
    pts = g.path_points(word)
    if not np.array_equal(pts[0], pts[-1]):
        raise WindingError("path is not closed")
    a = g.face_areas(areas)
    total = 0.0
    for f in g.bounded_faces:
        total += winding_number(pts, face_interior_point(g, f.index)) * a[f.index]
    return total


def windings(g: EmbeddedGraph, word: Sequence[int]) -> np.ndarray:
    """Winding number of a graph loop around every bounded face."""
    word = tuple(word)
    if not word:
        return np.zeros(len(g.bounded_faces), dtype=int)
    pts = g.path_points(word)
    return np.array([winding_number(pts, face_interior_point(g, f.index)) for f in g.bounded_faces])


def polyline_integrated_index(points) -> float:
    """Lebesgue integral of the winding number of a standalone polyline loop.

    By Green's formula this is the signed shoelace area of the closed polyline.
    """
    p = as_loop(points)
    return shoelace(p[:-1])


def index_holonomy(g: EmbeddedGraph, word: Sequence[int], D: float, areas=None) -> float:
    """Angle ``D * integral of n_l`` in ``[0, 2 pi)``."""
    return float(np.mod(D * integrated_index(g, word, areas), TWO_PI))


def drift_samples(samples: np.ndarray, indices: Sequence[float], D: float) -> np.ndarray:
    """Shift circle-valued loop samples (shape ``(N, k)``) by their index phases."""
    s = np.asarray(samples, dtype=float)
    idx = np.asarray(indices, dtype=float)
    if s.ndim != 2 or s.shape[1] != idx.size:
        raise WindingError("one index per loop column is required")
    return np.mod(s + D * idx[None, :], TWO_PI)


def drifted_law(group, samples, indices, D: float) -> np.ndarray:
    """Drifted law of circle loop samples: each column shifted by ``D`` times its index."""
    if not group.is_abelian():
        raise WindingError("index drifts need an abelian (central) target")
    return drift_samples(samples, indices, D)
