"""Braid words acting on group tuples and on lists of free-group words.

Conventions
-----------
* A braid word on ``n`` strands is a tuple of signed letters ``±i`` with
  ``1 <= i <= n-1``; ``+i`` is the generator beta_i.
* On free-group lists the action is positional and reads letters left to
  right: beta_i replaces ``(w_i, w_{i+1})`` by ``(w_{i+1}, w_{i+1} w_i w_{i+1}^-1)``.
  This realises the substitution automorphisms with
  ``a_{beta gamma} = a_beta o a_gamma`` and fixes ``w_n ... w_1``.
* On group tuples the action is a left action: the rightmost letter acts
  first, and beta_i replaces ``(x_i, x_{i+1})`` by ``(x_i x_{i+1} x_i^-1, x_i)``.
  With multiplicative functions reversing products, a holonomy ``h`` satisfies
  ``h(act_on_free(b, e)) == act_on_tuple(inverse(b), h(e))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .groups import FiniteGroup
from .loops import cyclic_reduce, free_reduce, inverse as word_inverse


class BraidError(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple = ()

    def __post_init__(self):
        if self.n < 2:
            raise BraidError("braids need at least two strands")
        letters = tuple(int(x) for x in self.letters)
        for x in letters:
            if x == 0 or abs(x) > self.n - 1:
                raise BraidError(f"letter {x} out of range for {self.n} strands")
        object.__setattr__(self, "letters", letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.n != other.n:
            raise BraidError("strand counts differ")
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple(-x for x in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return json.dumps(list(self.letters))


def parse_braid(text: str, n: int) -> BraidWord:
    """Parse a literal such as ``[1,-2,1]``."""
    try:
        letters = json.loads(text)
    except json.JSONDecodeError:
        raise BraidError(f"cannot parse braid literal {text!r}") from None
    if not isinstance(letters, list) or not all(isinstance(x, int) for x in letters):
        raise BraidError(f"braid literal must be a list of integers, got {text!r}")
    return BraidWord(n, tuple(letters))


def permutation_of(beta: BraidWord) -> tuple:
    """0-based permutation ``p`` with ``p[i]`` the image of strand ``i``.

    beta_i maps to the transposition of ``i-1`` and ``i`` and products map
    to compositions: ``perm(a*b) = perm(a) o perm(b)``.
    """
    p = list(range(beta.n))
    for x in reversed(beta.letters):
        i = abs(x) - 1
        p = [i + 1 if q == i else i if q == i + 1 else q for q in p]
    return tuple(p)


def _check_width(beta: BraidWord, width: int) -> None:
    if width != beta.n:
        raise BraidError(f"tuple of length {width} for a braid on {beta.n} strands")


def act_on_tuples(beta: BraidWord, X: np.ndarray, G: FiniteGroup) -> np.ndarray:
    """Vectorised left action on an ``(N, n)`` array of element indices."""
    X = np.array(X, dtype=np.int64, copy=True)
    if X.ndim != 2:
        raise BraidError("expected a 2-d array of tuples")
    _check_width(beta, X.shape[1])
    mul, inv = G.mul, G.inv
    for x in reversed(beta.letters):
        i = abs(x) - 1
        a, b = X[:, i].copy(), X[:, i + 1].copy()
        if x > 0:
            X[:, i] = mul[mul[a, b], inv[a]]
            X[:, i + 1] = a
        else:
            X[:, i] = b
            X[:, i + 1] = mul[mul[inv[b], a], b]
    return X


def act_on_tuple(beta: BraidWord, x: Sequence[int], G: FiniteGroup) -> tuple:
    return tuple(int(v) for v in act_on_tuples(beta, np.asarray([x]), G)[0])


def act_on_free(beta: BraidWord, words: Sequence[Sequence[int]]) -> list:
    """Positional action on a list of free-group words, letters left to right."""
    w = [free_reduce(x) for x in words]
    _check_width(beta, len(w))
    for x in beta.letters:
        w = _apply_free_letter(w, x)
    return w


def _apply_free_letter(w: list, x: int) -> list:
    i = abs(x) - 1
    u, v = w[i], w[i + 1]
    w = list(w)
    if x > 0:
        w[i], w[i + 1] = v, free_reduce(v + u + word_inverse(v))
    else:
        w[i], w[i + 1] = free_reduce(word_inverse(u) + v + u), u
    return w


def free_generators(n: int) -> list:
    return [(k,) for k in range(1, n + 1)]


def artin_check(images: Sequence[Sequence[int]]) -> bool:
    """Each image is conjugate to a generator and ``e_n ... e_1`` is fixed.

    Sufficient for the images to come from a braid only when they define an
    automorphism; :func:`find_braid` supplies that evidence constructively.
    """
    n = len(images)
    if n == 0:
        return False
    for w in images:
        c = cyclic_reduce(w)
        if len(c) != 1 or not 1 <= c[0] <= n:
            return False
    prod = free_reduce([x for w in reversed(images) for x in w])
    return prod == tuple(range(n, 0, -1))


def _letters(n: int) -> list:
    return [s * i for i in range(1, n) for s in (1, -1)]


def find_braid(targets: Sequence[Sequence[int]], max_len: int,
               start: Sequence[Sequence[int]] | None = None) -> BraidWord | None:
    """Shortest braid ``b`` with ``act_on_free(b, start) == targets``, if ``len(b) <= max_len``.

    ``start`` defaults to the free generators.  Bidirectional breadth-first
    search, deduplicated on reduced image tuples.
    """
    n = len(targets)
    if n < 2:
        raise BraidError("need at least two target words")
    src = tuple(free_reduce(w) for w in (start if start is not None else free_generators(n)))
    dst = tuple(free_reduce(w) for w in targets)
    if len(src) != n:
        raise BraidError("start and targets differ in length")
    if src == dst:
        return BraidWord(n, ())
    letters = _letters(n)
    fwd = {src: ()}
    bwd = {dst: ()}
    f_front, b_front = [src], [dst]
    f_depth = b_depth = 0
    best = None
    while f_depth + b_depth < max_len and (f_front or b_front):
        grow_forward = len(f_front) <= len(b_front) if f_front and b_front else bool(f_front)
        if grow_forward:
            f_depth += 1
            nxt = []
            for s in f_front:
                for x in letters:
                    t = tuple(_apply_free_letter(list(s), x))
                    if t in fwd:
                        continue
                    fwd[t] = fwd[s] + (x,)
                    nxt.append(t)
                    if t in bwd:
                        cand = fwd[t] + tuple(-y for y in reversed(bwd[t]))
                        if best is None or len(cand) < len(best):
                            best = cand
            f_front = nxt
        else:
            b_depth += 1
            nxt = []
            for s in b_front:
                for x in letters:
                    t = tuple(_apply_free_letter(list(s), x))
                    if t in bwd:
                        continue
                    bwd[t] = bwd[s] + (x,)
                    nxt.append(t)
                    if t in fwd:
                        cand = fwd[t] + tuple(-y for y in reversed(bwd[t]))
                        if best is None or len(cand) < len(best):
                            best = cand
            b_front = nxt
        if best is not None:
            break
    if best is None:
        return None
    beta = BraidWord(n, best)
    if [tuple(w) for w in act_on_free(beta, src)] != list(dst):
        raise AssertionError("braid search produced a wrong braid")
    return beta


def spreading_braid(k: Sequence[int], n: int) -> BraidWord:
    """Braid moving entries ``k_1 < ... < k_m`` (1-based) of a tuple to the front.

    After ``act_on_tuple`` the first ``m`` positions hold ``x_{k_1}, ..., x_{k_m}``.
    """
    k = [int(v) for v in k]
    if not k or any(a >= b for a, b in zip(k, k[1:])) or k[0] < 1 or k[-1] > n:
        raise BraidError(f"need a strictly increasing sequence in 1..{n}, got {k}")
    letters: list[int] = []
    for i in range(len(k), 0, -1):
        letters.extend(-j for j in range(i, k[i - 1]))
    return BraidWord(n, tuple(letters))


def pair_braid(i: int, j: int, n: int) -> BraidWord:
    """``beta_i^-1 ... beta_{j-2}^-1 beta_{j-1} ... beta_i`` for ``1 <= i < j <= n``.

    Acting on a tuple it leaves ``x_i`` at position ``j`` and
    ``x_i x_j x_i^-1`` at position ``i``.
    """
    if not 1 <= i < j <= n:
        raise BraidError(f"need 1 <= i < j <= {n}")
    letters = [-m for m in range(i, j - 1)] + list(range(j - 1, i - 1, -1))
    return BraidWord(n, tuple(letters))


def braids_up_to(n: int, length: int):
    """All braid words on ``n`` strands with at most ``length`` letters."""
    letters = _letters(n)
    yield BraidWord(n, ())
    frontier = [()]
    for _ in range(length):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
                yield BraidWord(n, w + (x,))
        frontier = nxt

