"""Finite group arithmetic on dense integer indices.

Elements of a :class:`FiniteGroup` are the integers ``0 .. order-1``; the
multiplication and inverse tables are numpy arrays so that products of whole
batches of elements are a single fancy-indexing operation.  The circle group
lives in :mod:`planar_ym.levy` next to its Brownian motion.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its Cayley table.

    ``mul[a, b]`` is the index of the product ``a*b``.  For symmetric groups
    the product is composition of maps, ``(a*b)(i) = a(b(i))``.
    """

    name: str
    mul: np.ndarray
    inv: np.ndarray
    identity: int
    labels: tuple[str, ...]
    _index: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.labels)

    @property
    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    # -- element access -------------------------------------------------
    def element(self, label) -> int:
        """Look up an element by label, cycle notation or integer index."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= int(label) < self.order:
                raise GroupError(f"element index {label} out of range for {self.name}")
            return int(label)
        key = str(label).strip()
        if key in self._index:
            return self._index[key]
        alias = self._index.get(("alias", key))
        if alias is not None:
            return alias
        perms = getattr(self, "_perms", None)
        if perms is not None and key.startswith("("):
            return perms.index(parse_cycles(key, len(perms[0])))
        raise GroupError(f"unknown element {label!r} of {self.name}")

    def label(self, g: int) -> str:
        return self.labels[int(g)]

    # -- arithmetic -------------------------------------------------------
    def multiply(self, a, b):
        return self.mul[a, b]

    def inverse(self, a):
        return self.inv[a]

    def conjugate(self, g, x):
        """Return ``x^{-1} g x``."""
        return self.mul[self.mul[self.inv[x], g], x]

    def product(self, items: Iterable[int]) -> int:
        acc = self.identity
        for g in items:
            acc = int(self.mul[acc, g])
        return acc

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    # array-level interface shared with the circle group
    def mul_arrays(self, a, b):
        return self.mul[a, b]

    def inv_arrays(self, a):
        return self.inv[a]

    def identity_array(self, shape) -> np.ndarray:
        return np.full(shape, self.identity, dtype=np.int64)


def _check_table(mul: np.ndarray) -> int:
    n = mul.shape[0]
    if mul.shape != (n, n):
        raise GroupError("multiplication table must be square")
    if mul.min() < 0 or mul.max() >= n:
        raise GroupError("multiplication table entries out of range")
    full = np.arange(n)
    for r in range(n):
        if not np.array_equal(np.sort(mul[r]), full) or not np.array_equal(np.sort(mul[:, r]), full):
            raise GroupError("multiplication table is not a Latin square")
    # (ab)c == a(bc) for all triples, vectorised
    left = mul[mul[:, :, None], np.arange(n)[None, None, :]]
    right = mul[np.arange(n)[:, None, None], mul[None, :, :]]
    if not np.array_equal(left, right):
        raise GroupError("multiplication table is not associative")
    ids = [e for e in range(n) if np.array_equal(mul[e], full) and np.array_equal(mul[:, e], full)]
    if len(ids) != 1:
        raise GroupError("multiplication table has no two-sided identity")
    return ids[0]


def from_table(mul: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
               name: str = "table", validate: bool = True) -> FiniteGroup:
    """Build a group from an explicit Cayley table, checking the group axioms."""
    table = np.asarray(mul, dtype=np.int64)
    if validate:
        identity = _check_table(table)
    else:
        identity = int(np.flatnonzero((table == np.arange(table.shape[0])).all(axis=1))[0])
    n = table.shape[0]
    rows, cols = np.nonzero(table == identity)
    inv = np.empty(n, dtype=np.int64)
    inv[rows] = cols
    if labels is None:
        labels = [str(i) for i in range(n)]
    labels = tuple(str(s) for s in labels)
    if len(labels) != n or len(set(labels)) != n:
        raise GroupError("labels must be distinct, one per element")
    index = {s: i for i, s in enumerate(labels)}
    table.setflags(write=False)
    inv.setflags(write=False)
    return FiniteGroup(name, table, inv, identity, labels, index)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    r = np.arange(n)
    return from_table((r[:, None] + r[None, :]) % n, [str(i) for i in range(n)], name=f"Z{n}")


def _cycle_notation(perm: Sequence[int]) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        c, i = [], start
        while i not in seen:
            seen.add(i)
            c.append(i + 1)
            i = perm[i]
        cycles.append("(" + "".join(str(k) for k in c) + ")")
    return "".join(cycles) or "()"


def parse_cycles(text: str, n: int) -> tuple[int, ...]:
    """Parse cycle notation such as ``(12)(34)`` or ``(1 2 3)`` into one-line form (0-based)."""
    body = text.strip()
    perm = list(range(n))
    if body in ("()", "e", "id"):
        return tuple(perm)
    cycles = re.findall(r"\(([^()]*)\)", body)
    if not cycles or re.sub(r"\([^()]*\)", "", body).strip():
        raise GroupError(f"cannot parse cycle notation {text!r}")
    for c in reversed(cycles):  # rightmost cycle acts first
        toks = re.split(r"[\s,]+", c.strip()) if re.search(r"[\s,]", c.strip()) else list(c.strip())
        pts = [int(t) for t in toks if t]
        if any(not 1 <= p <= n for p in pts) or len(set(pts)) != len(pts):
            raise GroupError(f"bad cycle {c!r} for S{n}")
        step = {pts[k] - 1: pts[(k + 1) % len(pts)] - 1 for k in range(len(pts))}
        perm = [step.get(perm[i], perm[i]) for i in range(n)]
    return tuple(perm)


def _lex_rank(P: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each row of a batch of permutations."""
    N, n = P.shape
    rank = np.zeros(N, dtype=np.int64)
    for i in range(n):
        smaller_after = (P[:, i + 1:] < P[:, i:i + 1]).sum(axis=1)
        rank = rank * (n - i) + smaller_after
    return rank


def symmetric(n: int) -> FiniteGroup:
    """The symmetric group on ``{1..n}``; labels are one-line notation, e.g. ``"213"``."""
    if not 1 <= n <= 7:
        raise GroupError("symmetric(n) supports 1 <= n <= 7 (the S8 Cayley table does not fit in memory)")
    perms = list(itertools.permutations(range(n)))
    P = np.array(perms, dtype=np.int64).reshape(len(perms), n)
    mul = np.empty((len(perms), len(perms)), dtype=np.int64)
    for a in range(len(perms)):
        mul[a] = _lex_rank(P[a][P])  # row a: a o b for every b
    labels = ["".join(str(p[i] + 1) for i in range(n)) for p in perms]
    g = from_table(mul, labels, name=f"S{n}", validate=n <= 4)
    for i, p in enumerate(perms):
        g._index[("alias", _cycle_notation(p))] = i
    g._index[("alias", "e")] = g.identity
    g._index[("alias", "()")] = g.identity
    object.__setattr__(g, "_perms", perms)
    return g


def permutation_of_element(G: FiniteGroup, g: int) -> tuple[int, ...]:
    """One-line (0-based) permutation of an element of a symmetric group."""
    perms = getattr(G, "_perms", None)
    if perms is None:
        raise GroupError(f"{G.name} is not a symmetric group")
    return perms[int(g)]


def cycle_label(G: FiniteGroup, g: int) -> str:
    return _cycle_notation(permutation_of_element(G, g))


def build_group(spec) -> FiniteGroup:
    """Build a group from a descriptor.

    Accepts strings (``"S3"``, ``"Z4"``, ``"Z/4"``, ``"cyclic:4"``,
    ``"symmetric:3"``) or dicts ``{"kind": "symmetric"|"cyclic", "n": k}`` and
    ``{"kind": "table", "mul": [[...]], "labels": [...]}``.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        s = spec.strip()
        m = re.fullmatch(r"(?i)(s|sym|symmetric)[:/]?(\d+)", s)
        if m:
            return symmetric(int(m.group(2)))
        m = re.fullmatch(r"(?i)(z|c|cyclic)[:/]?(\d+)", s)
        if m:
            return cyclic(int(m.group(2)))
        raise GroupError(f"unknown group descriptor {spec!r}")
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "symmetric":
            return symmetric(int(spec["n"]))
        if kind == "cyclic":
            return cyclic(int(spec["n"]))
        if kind == "table":
            return from_table(spec["mul"], spec.get("labels"), name=spec.get("name", "table"))
        raise GroupError(f"unknown group kind {kind!r}")
    raise GroupError(f"cannot build a group from {spec!r}")


# -- conjugacy ---------------------------------------------------------------

def conjugation_table(G: FiniteGroup) -> np.ndarray:
    """``C[x, g] = x^{-1} g x``."""
    return G.mul[G.mul[G.inv[:, None], np.arange(G.order)[None, :]], np.arange(G.order)[:, None]]


def conjugacy_classes(G: FiniteGroup) -> list[list[int]]:
    C = conjugation_table(G)
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for g in range(G.order):
        if seen[g]:
            continue
        cls = sorted(set(int(v) for v in C[:, g]))
        seen[cls] = True
        classes.append(cls)
    return classes


def class_index(G: FiniteGroup) -> np.ndarray:
    """Map each element to the index of its conjugacy class."""
    out = np.empty(G.order, dtype=np.int64)
    for k, cls in enumerate(conjugacy_classes(G)):
        out[cls] = k
    return out


def is_class_function(G: FiniteGroup, values, tol: float = 0.0) -> bool:
    values = np.asarray(values)
    C = conjugation_table(G)
    return bool(np.all(np.abs(values[C] - values[None, :]) <= tol))


def tuple_canonical(G: FiniteGroup, t: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least element of the diagonal-conjugation orbit of ``t``."""
    if len(t) == 0:
        raise GroupError("cannot canonicalise an empty tuple")
    arr = np.asarray(t, dtype=np.int64)
    C = conjugation_table(G)
    orbit = C[:, arr]  # row x holds (x^-1 t_i x)_i
    order = np.lexsort(orbit.T[::-1])
    return tuple(int(v) for v in orbit[order[0]])


def canonical_codes(G: FiniteGroup, k: int) -> np.ndarray:
    """Canonical representative for every k-tuple, as mixed-radix integer codes.

    Entry ``c`` is the code of ``tuple_canonical`` of the tuple encoded by ``c``
    (first coordinate most significant).
    """
    n = G.order
    total = n ** k
    digits = np.indices((n,) * k).reshape(k, total)
    C = conjugation_table(G)
    weights = n ** np.arange(k - 1, -1, -1)
    best = np.full(total, np.iinfo(np.int64).max)
    for x in range(n):
        codes = weights @ C[x][digits]
        np.minimum(best, codes, out=best)
    return best


def encode_tuples(digits: np.ndarray, n: int) -> np.ndarray:
    """Encode rows of ``digits`` (shape ``(N, k)``) as integers, first column most significant."""
    k = digits.shape[1]
    weights = n ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return digits.astype(np.int64) @ weights


def decode_tuple(code: int, n: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        code, r = divmod(int(code), n)
        out.append(r)
    return tuple(reversed(out))


# -- subgroups -----------------------------------------------------------------

def subgroup_generated(G: FiniteGroup, S: Iterable[int]) -> frozenset[int]:
    gens = {int(s) for s in S}
    if not gens:
        raise GroupError("generating set must be non-empty")
    H = {G.identity} | gens
    frontier = list(H)
    while frontier:
        new = []
        for a in frontier:
            for b in gens:
                for c in (int(G.mul[a, b]), int(G.mul[b, a])):
                    if c not in H:
                        H.add(c)
                        new.append(c)
        frontier = new
    return frozenset(H)


def is_subgroup(G: FiniteGroup, H: Iterable[int]) -> bool:
    H = {int(h) for h in H}
    if G.identity not in H:
        return False
    return all(int(G.mul[a, G.inv[b]]) in H for a in H for b in H)


def all_subgroups(G: FiniteGroup, max_order: int = 24) -> list[frozenset[int]]:
    """Every subgroup, found by adjoining one element at a time to known subgroups."""
    if G.order > max_order:
        raise GroupError(f"subgroup enumeration capped at order {max_order}")
    trivial = frozenset({G.identity})
    found = {trivial}
    queue = [trivial]
    while queue:
        H = queue.pop()
        for g in G.elements:
            if g in H:
                continue
            K = subgroup_generated(G, H | {g})
            if K not in found:
                found.add(K)
                queue.append(K)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def jordan_covering_check(G: FiniteGroup, H: Iterable[int]) -> bool:
    """True iff the conjugates of ``H`` cover ``G``."""
    H = frozenset(int(h) for h in H)
    if not is_subgroup(G, H):
        raise GroupError("H is not a subgroup")
    C = conjugation_table(G)
    covered = set(int(v) for v in C[:, sorted(H)].ravel())
    return len(covered) == G.order


def discrete_distance(x: int, y: int) -> int:
    return int(x != y)
