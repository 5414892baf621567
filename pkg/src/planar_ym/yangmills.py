"""Discrete planar Yang-Mills fields.

Two constructions are implemented and compared:

* the lasso construction samples one Lévy increment per bounded face and solves
  for the edge values (tree edges carry the identity), and
* the density construction weights uniformly distributed edge values by
  ``prod_F Q_{area(F)}(h(boundary F))``.

Holonomies reverse products: the value of a path ``d_1 d_2 ... d_k`` is
``h(d_k) ... h(d_2) h(d_1)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .graph import EmbeddedGraph, SpanningTree, edge_index
from .groups import (
    FiniteGroup,
    canonical_codes,
    conjugation_table,
    decode_tuple,
    encode_tuples,
)
from .levy import CIRCLE, CircleLevy, JumpMeasure, invariance_scope
from .loops import FacialBasis, facial_basis_change

ENUMERATION_BUDGET = 10 ** 7
CHUNK = 1 << 16


class YMError(ValueError):
    pass


# -- evaluation ------------------------------------------------------------------

def evaluate_words(group, values: np.ndarray, words: Sequence[Sequence[int]]) -> np.ndarray:
    """Holonomies of ``words`` for a batch of edge assignments.

    ``values`` has shape ``(N, E)``; the result has shape ``(N, len(words))``.
    """
    values = np.asarray(values)
    n, E = values.shape
    out = np.empty((n, len(words)), dtype=values.dtype)
    inv_cache: dict[int, np.ndarray] = {}
    for k, word in enumerate(words):
        acc = group.identity_array(n).astype(values.dtype)
        for d in word:
            i = edge_index(d)
            if not 0 <= i < E:
                raise YMError(f"dart {d} not in graph")
            if d > 0:
                v = values[:, i]
            else:
                if i not in inv_cache:
                    inv_cache[i] = group.inv_arrays(values[:, i])
                v = inv_cache[i]
            acc = group.mul_arrays(v, acc)
        out[:, k] = acc
    return out


@dataclass(frozen=True, eq=False)
class HolonomyField:
    graph: EmbeddedGraph
    group: object
    values: np.ndarray  # one entry per positively oriented edge

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.graph.n_edges,):
            raise YMError("one value per edge is required")
        object.__setattr__(self, "values", v)

    def __call__(self, word: Sequence[int]):
        return holonomy(self, word)

    def to_json(self) -> dict:
        return {str(e.eid): self.group.label(self.values[i]) for i, e in enumerate(self.graph.edges)}


def holonomy(h: HolonomyField, word: Sequence[int]):
    out = evaluate_words(h.group, h.values[None, :], [tuple(word)])[0, 0]
    return out.item() if hasattr(out, "item") else out


def gauge_transform(h: HolonomyField, j: Sequence) -> HolonomyField:
    """``(j . h)(e) = j_head^-1 h(e) j_tail``."""
    g, G = h.graph, h.group
    j = np.asarray(j)
    if j.shape != (g.n_vertices,):
        raise YMError("gauge needs one element per vertex")
    tails = np.array([e.tail for e in g.edges], dtype=np.int64)
    heads = np.array([e.head for e in g.edges], dtype=np.int64)
    vals = G.mul_arrays(G.mul_arrays(G.inv_arrays(j[heads]), h.values), j[tails])
    return HolonomyField(g, G, vals)


# -- lasso construction -----------------------------------------------------------

def _check_levy(levy):
    if isinstance(levy, CircleLevy):
        return "pure"
    if not isinstance(levy, JumpMeasure):
        raise YMError("expected a JumpMeasure or CircleLevy")
    scope, _ = invariance_scope(levy)
    if scope == "neither":
        raise YMError("the Lévy process must be conjugation-invariant by the group its support generates")
    return scope


@dataclass(frozen=True, eq=False)
class LassoSampler:
    """Face variables -> edge values for a fixed tree, with tree edges at the identity."""

    graph: EmbeddedGraph
    tree: SpanningTree
    basis: FacialBasis
    generator_words: tuple = field(repr=False)  # per edge: facial word, or () for tree edges

    @classmethod
    def build(cls, g: EmbeddedGraph, T: SpanningTree, bases=None) -> "LassoSampler":
        basis = facial_basis_change(g, T, bases)
        words = []
        gens = {e: k + 1 for k, e in enumerate(T.non_tree_edges())}
        for i in range(g.n_edges):
            words.append(basis.generator_in_faces[gens[i]] if i in gens else ())
        return cls(g, T, basis, tuple(words))

    def edge_values(self, group, Y: np.ndarray) -> np.ndarray:
        """Edge values from face values ``Y`` of shape ``(N, #faces)``.

        Facial letter ``f+1`` is read as dart ``f+1`` of ``Y`` so the facial
        words evaluate with the same reversed-product convention.
        """
        return evaluate_words(group, Y, self.generator_words)


def sample_faces(levy, areas: np.ndarray, rng: np.random.Generator, size: int) -> np.ndarray:
    cols = [np.asarray(levy.sample(float(a), rng, size)) for a in areas]
    Y = np.stack(cols, axis=1) if cols else np.zeros((size, 0))
    if isinstance(levy, JumpMeasure) and _check_levy(levy) == "self_invariant":
        G = levy.group
        U = rng.integers(G.order, size=size)
        Y = G.mul[G.mul[G.inv[U][:, None], Y], U[:, None]]
    return Y


def sample_fields(g: EmbeddedGraph, T: SpanningTree, areas, levy, rng: np.random.Generator,
                  size: int, sampler: LassoSampler | None = None) -> np.ndarray:
    _check_levy(levy)
    a = g.face_areas(areas)
    sampler = sampler or LassoSampler.build(g, T)
    Y = sample_faces(levy, a, rng, size)
    return sampler.edge_values(levy.group, Y)


def sample_field(g: EmbeddedGraph, T: SpanningTree, areas, levy, rng: np.random.Generator) -> HolonomyField:
    vals = sample_fields(g, T, areas, levy, rng, 1)[0]
    return HolonomyField(g, levy.group, vals)


# -- exact laws --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LoopLaw:
    """Exact law of a tuple of holonomies, indexed by mixed-radix tuple codes."""

    group: FiniteGroup
    k: int
    table: np.ndarray
    canonical: bool = True
    names: tuple = ()

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.shape != (self.group.order ** self.k,):
            raise YMError("law table has the wrong size")
        if abs(t.sum() - 1.0) > 1e-12:
            raise YMError(f"law sums to {t.sum()!r}")
        object.__setattr__(self, "table", t)

    def support(self) -> list:
        return [(decode_tuple(c, self.group.order, self.k), float(self.table[c]))
                for c in np.flatnonzero(self.table > 0)]

    def tv(self, other: "LoopLaw") -> float:
        if other.group is not self.group and other.group.order != self.group.order:
            raise YMError("laws over different groups")
        a, b = self, other
        if a.canonical != b.canonical:
            a, b = a.canonicalised(), b.canonicalised()
        return 0.5 * float(np.abs(a.table - b.table).sum())

    def canonicalised(self) -> "LoopLaw":
        if self.canonical:
            return self
        codes = canonical_codes(self.group, self.k)
        t = np.bincount(codes, weights=self.table, minlength=self.table.size)
        return LoopLaw(self.group, self.k, t, True, self.names)

    def map_tuples(self, fn: Callable[[np.ndarray], np.ndarray]) -> "LoopLaw":
        """Push the law forward through ``fn`` acting on ``(N, k)`` tuple arrays."""
        n = self.group.order
        codes = np.flatnonzero(self.table > 0)
        digits = (codes[:, None] // n ** np.arange(self.k - 1, -1, -1)) % n
        out = np.asarray(fn(digits), dtype=np.int64)
        new = encode_tuples(out, n)
        if self.canonical:
            new = canonical_codes(self.group, self.k)[new]
        t = np.bincount(new, weights=self.table[codes], minlength=self.table.size)
        return LoopLaw(self.group, self.k, t, self.canonical, self.names)

    def marginal(self, i: int) -> np.ndarray:
        n = self.group.order
        codes = np.arange(self.table.size)
        digit = (codes // n ** (self.k - 1 - i)) % n
        return np.bincount(digit, weights=self.table, minlength=n)

    def rows(self) -> list:
        out = []
        for tup, p in self.support():
            out.append((" ".join(self.group.label(x) for x in tup), p))
        return out

    def to_csv(self) -> str:
        lines = ["label,probability"]
        lines += [f"{lab},{p:.17g}" for lab, p in self.rows()]
        return "\n".join(lines) + "\n"


def _tabulate(G: FiniteGroup, tuples: np.ndarray, weights: np.ndarray, size: int) -> np.ndarray:
    return np.bincount(encode_tuples(tuples, G.order), weights=weights, minlength=size)


def _chunks(total: int, chunk: int = CHUNK):
    for start in range(0, total, chunk):
        yield start, min(total, start + chunk)


def _digits(start: int, stop: int, n: int, k: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    return (idx[:, None] // (n ** np.arange(k - 1, -1, -1, dtype=np.int64))) % n


def _finish(G, k, raw, canonical, names):
    law = LoopLaw(G, k, raw / raw.sum(), False, names)
    return law.canonicalised() if canonical else law


def _conjugation_average(G: FiniteGroup, raw: np.ndarray, k: int) -> np.ndarray:
    C = conjugation_table(G)
    n = G.order
    digits = _digits(0, n ** k, n, k)
    acc = np.zeros_like(raw)
    for x in range(n):
        acc += np.bincount(encode_tuples(C[x][digits], n), weights=raw, minlength=raw.size)
    return acc / n


def exact_lasso_law(g: EmbeddedGraph, T: SpanningTree, areas, levy: JumpMeasure,
                    loops: Sequence[Sequence[int]], canonical: bool = True,
                    names: Sequence[str] = (), bases=None) -> LoopLaw:
    """Exact law of ``(h(l_1), ..., h(l_k))`` from independent face increments."""
    scope = _check_levy(levy)
    if not isinstance(levy, JumpMeasure):
        raise YMError("exact laws need a finite group")
    G = levy.group
    n, nf, k = G.order, len(g.bounded_faces), len(loops)
    if n ** nf > ENUMERATION_BUDGET:
        raise YMError(f"{n}^{nf} face assignments exceed the budget; use Monte Carlo (wilson)")
    if k == 0:
        raise YMError("need at least one loop")
    a = g.face_areas(areas)
    dens = [levy.density(float(x)).probabilities for x in a]
    sampler = LassoSampler.build(g, T, bases)
    raw = np.zeros(n ** k)
    for s, e in _chunks(n ** nf):
        Y = _digits(s, e, n, nf)
        w = np.ones(len(Y))
        for f in range(nf):
            w *= dens[f][Y[:, f]]
        H = sampler.edge_values(G, Y)
        raw += _tabulate(G, evaluate_words(G, H, loops), w, raw.size)
    if scope == "self_invariant":
        raw = _conjugation_average(G, raw, k)
    return _finish(G, k, raw, canonical, tuple(names))


def _edge_enumeration(g: EmbeddedGraph, G: FiniteGroup, Q, loops, gauge_tree):
    """Sum weights ``prod_F Q[F](h(dF))`` over edge assignments; ``Q=None`` means weight 1."""
    n, k = G.order, len(loops)
    if k == 0:
        raise YMError("need at least one loop")
    free = (list(range(g.n_edges)) if gauge_tree is None
            else [i for i in range(g.n_edges) if i not in gauge_tree.tree_edges])
    if n ** len(free) > ENUMERATION_BUDGET:
        raise YMError(f"{n}^{len(free)} edge assignments exceed the budget; "
                      "pass gauge_tree or use Monte Carlo")
    boundaries = [f.boundary for f in g.bounded_faces]
    raw = np.zeros(n ** k)
    total_weight = 0.0
    total = n ** len(free)
    for s, e in _chunks(total):
        D = _digits(s, e, n, len(free))
        H = np.full((len(D), g.n_edges), G.identity, dtype=np.int64)
        H[:, free] = D
        w = np.ones(len(D))
        if Q is not None:
            B = evaluate_words(G, H, boundaries)
            for f in range(len(boundaries)):
                w *= Q[f][B[:, f]]
        total_weight += w.sum()
        raw += _tabulate(G, evaluate_words(G, H, loops), w, raw.size)
    return raw, total_weight / total


def exact_density_law(g: EmbeddedGraph, areas, levy: JumpMeasure, loops: Sequence[Sequence[int]],
                      canonical: bool = True, names: Sequence[str] = (),
                      gauge_tree: SpanningTree | None = None) -> LoopLaw:
    """Exact law under ``prod_F Q_{area(F)}(h(dF)) prod_e dh(e)``.

    With ``gauge_tree`` the edges of that tree are fixed to the identity; this
    leaves the law of gauge-invariant statistics (canonical tuples of loops
    based at one vertex) unchanged and shrinks the enumeration.
    """
    if not isinstance(levy, JumpMeasure):
        raise YMError("exact laws need a finite group")
    G = levy.group
    if not levy.is_pure():
        raise YMError("the density construction needs a conjugation-invariant (class function) density")
    if gauge_tree is not None and canonical is False:
        raise YMError("raw (non-canonical) laws are gauge dependent; drop gauge_tree")
    a = g.face_areas(areas)
    Q = [levy.density(float(x)).haar_density() for x in a]
    raw, Z = _edge_enumeration(g, G, Q, loops, gauge_tree)
    if abs(Z - 1.0) > 1e-10:
        raise AssertionError(f"density normalisation is {Z!r}, expected 1")
    return _finish(G, len(loops), raw, canonical, tuple(names))


def exact_haar_law(g: EmbeddedGraph, G: FiniteGroup, paths: Sequence[Sequence[int]],
                   canonical: bool = False, names: Sequence[str] = ()) -> LoopLaw:
    """Law of path holonomies when every edge is independent and uniform."""
    raw, _ = _edge_enumeration(g, G, None, paths, None)
    return _finish(G, len(paths), raw, canonical, tuple(names))


def paradigm_tv(g, T, areas, levy, loops, gauge_tree=None) -> float:
    """Total variation between the lasso and density laws of a loop tuple."""
    a = exact_lasso_law(g, T, areas, levy, loops)
    b = exact_density_law(g, areas, levy, loops, gauge_tree=gauge_tree)
    return a.tv(b)


# -- Monte Carlo -------------------------------------------------------------------

@dataclass(frozen=True)
class WilsonEstimate:
    mean: float
    stderr: float
    n_samples: int


def check_invariant(G: FiniteGroup, f: Callable[[np.ndarray], np.ndarray], k: int,
                    rng: np.random.Generator | None = None, max_tuples: int = 20000) -> bool:
    """Is ``f`` invariant under diagonal conjugation of ``k``-tuples?

    Exhaustive when ``|G|^k <= max_tuples``, otherwise on a random sample.
    """
    n = G.order
    if n ** k <= max_tuples:
        X = _digits(0, n ** k, n, k)
    else:
        rng = rng or np.random.default_rng(0)
        X = rng.integers(n, size=(max_tuples // n, k))
    base = np.asarray(f(X), dtype=float)
    C = conjugation_table(G)
    return all(np.allclose(np.asarray(f(C[x][X]), dtype=float), base, rtol=0, atol=1e-12)
               for x in range(n))


def _seed_sequence(rng) -> np.random.SeedSequence:
    if isinstance(rng, np.random.SeedSequence):
        return rng
    if isinstance(rng, np.random.Generator):
        return np.random.SeedSequence(int(rng.integers(2 ** 63)))
    return np.random.SeedSequence(rng)


def wilson_estimate(g: EmbeddedGraph, T: SpanningTree, areas, levy, loops: Sequence[Sequence[int]],
                    f: Callable[[np.ndarray], np.ndarray], n_samples: int, rng=0,
                    threads: int = 1, chunk: int = 10000, check: bool = True) -> WilsonEstimate:
    """Monte Carlo mean of ``f(h(l_1), ..., h(l_k))``.

    ``f`` takes an ``(N, k)`` array of holonomies and returns ``N`` values.
    Samples are drawn in fixed-size chunks with one spawned seed per chunk, so
    the result depends on the seed but not on ``threads``.
    """
    if n_samples < 2:
        raise YMError("need at least two samples")
    _check_levy(levy)
    if check and isinstance(levy, JumpMeasure) and not check_invariant(levy.group, f, len(loops)):
        raise YMError("f is not invariant under diagonal conjugation")
    sampler = LassoSampler.build(g, T)
    a = g.face_areas(areas)
    sizes = [min(chunk, n_samples - s) for s in range(0, n_samples, chunk)]
    seeds = _seed_sequence(rng).spawn(len(sizes))

    def work(item):
        size, seed = item
        r = np.random.default_rng(seed)
        Y = sample_faces(levy, a, r, size)
        H = sampler.edge_values(levy.group, Y)
        vals = np.asarray(f(evaluate_words(levy.group, H, loops)), dtype=float)
        return vals.sum(), np.square(vals).sum()

    items = list(zip(sizes, seeds))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, items))
    else:
        parts = [work(it) for it in items]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    mean = s1 / n_samples
    var = max(s2 / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
    return WilsonEstimate(float(mean), math.sqrt(var / n_samples), n_samples)


def circle_wilson_oracle(levy: CircleLevy, area: float, winding: int = 1) -> float:
    """``E[cos(n theta)]`` for the holonomy of a simple loop enclosing ``area``."""
    return math.cos(winding * levy.drift * area) * math.exp(-levy.variance_rate * winding ** 2 * area / 2)

