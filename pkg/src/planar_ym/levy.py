"""Lévy processes on finite groups and Brownian motion on the circle.

A finite-group Lévy process is described by its jump measure: the process
waits an exponential time of rate ``total_rate`` and then multiplies on the
right by an element drawn from ``rates / total_rate``.  Its marginal laws are
computed with the uniformization (Poisson) series and sampled exactly by
drawing the Poisson number of jumps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .groups import (
    FiniteGroup,
    build_group,
    conjugation_table,
    is_class_function,
    subgroup_generated,
)

POISSON_TAIL = 1e-12
TWO_PI = 2.0 * math.pi


class LevyError(ValueError):
    pass


# -- measures on a finite group -----------------------------------------------

def convolve(G: FiniteGroup, p, q) -> np.ndarray:
    """Law of ``X*Y`` for independent ``X ~ p`` and ``Y ~ q``."""
    out = np.zeros(G.order)
    np.add.at(out, G.mul.ravel(), np.outer(p, q).ravel())
    return out


def convolution_power(G: FiniteGroup, p, n: int) -> np.ndarray:
    out = point_mass(G, G.identity)
    for _ in range(n):
        out = convolve(G, out, p)
    return out


def point_mass(G: FiniteGroup, g: int) -> np.ndarray:
    out = np.zeros(G.order)
    out[g] = 1.0
    return out


def uniform(G: FiniteGroup) -> np.ndarray:
    return np.full(G.order, 1.0 / G.order)


def conjugate_measure(G: FiniteGroup, p, g: int) -> np.ndarray:
    """Law of ``g^{-1} X g`` for ``X ~ p``."""
    out = np.zeros(G.order)
    np.add.at(out, conjugation_table(G)[g], p)
    return out


def conjugation_average(G: FiniteGroup, p) -> np.ndarray:
    """Haar average of the conjugated measures ``p^g``."""
    C = conjugation_table(G)
    out = np.zeros(G.order)
    np.add.at(out, C.ravel(), np.tile(np.asarray(p, dtype=float), G.order))
    return out / G.order


def tv_distance(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


@dataclass(frozen=True, eq=False)
class Density:
    """A probability vector over the elements of a finite group."""

    group: FiniteGroup
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.shape != (self.group.order,) or (p < -1e-15).any():
            raise LevyError("density must be a non-negative vector over the group")
        if abs(p.sum() - 1.0) > 1e-12:
            raise LevyError(f"density sums to {p.sum()!r}, not 1")
        object.__setattr__(self, "probabilities", p)

    def haar_density(self) -> np.ndarray:
        """Density with respect to the normalised Haar measure."""
        return self.probabilities * self.group.order

    def __getitem__(self, g):
        return self.probabilities[self.group.element(g)]


@dataclass(frozen=True, eq=False)
class JumpMeasure:
    """Jump rates of a pure-jump Lévy process on a finite group."""

    group: FiniteGroup
    rates: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        r = np.asarray(self.rates, dtype=float)
        if r.shape != (self.group.order,):
            raise LevyError("one rate per group element is required")
        if not np.all(np.isfinite(r)) or (r < 0).any():
            raise LevyError("rates must be finite and non-negative")
        if r[self.group.identity] != 0:
            raise LevyError("the identity must carry zero rate")
        r.setflags(write=False)
        object.__setattr__(self, "rates", r)

    @classmethod
    def from_labels(cls, group: FiniteGroup, jumps: Mapping[str, float]) -> "JumpMeasure":
        r = np.zeros(group.order)
        for lab, rate in jumps.items():
            r[group.element(lab)] += float(rate)
        return cls(group, r)

    @classmethod
    def class_function(cls, group: FiniteGroup, rate: float = 1.0) -> "JumpMeasure":
        """Equal rate on every non-identity element."""
        r = np.full(group.order, float(rate))
        r[group.identity] = 0.0
        return cls(group, r)

    @property
    def total_rate(self) -> float:
        return float(self.rates.sum())

    def jump_law(self) -> np.ndarray:
        lam = self.total_rate
        if lam == 0:
            return point_mass(self.group, self.group.identity)
        return self.rates / lam

    def is_pure(self) -> bool:
        return is_class_function(self.group, self.rates, tol=1e-12)

    def density(self, t: float) -> Density:
        return semigroup_density(self, t)

    def sample(self, t: float, rng: np.random.Generator, size=None):
        return sample_levy(self, t, rng, size)


def semigroup_density(m: JumpMeasure, t: float) -> Density:
    """Marginal law at time ``t`` via the Poisson series, truncated at tail < 1e-12."""
    if t < 0:
        raise LevyError("time must be non-negative")
    G = m.group
    key = float(t)
    if key in m._cache:
        return m._cache[key]
    lam = m.total_rate
    if t == 0 or lam == 0:
        out = Density(G, point_mass(G, G.identity))
    else:
        mean = lam * t
        kmax = int(stats.poisson.isf(POISSON_TAIL, mean)) + 1
        weights = stats.poisson.pmf(np.arange(kmax + 1), mean)
        nu = m.jump_law()
        term = point_mass(G, G.identity)
        acc = weights[0] * term
        for k in range(1, kmax + 1):
            term = convolve(G, term, nu)
            acc += weights[k] * term
        # mass beyond kmax is below the tail bound; fold it back in so the vector is a law
        acc /= acc.sum()
        out = Density(G, acc)
    m._cache[key] = out
    return out


def sample_levy(m: JumpMeasure, t: float, rng: np.random.Generator, size=None):
    """Exact draw(s) of ``Y_t``: a Poisson number of i.i.d. right jumps."""
    G = m.group
    shape = () if size is None else (size,) if np.isscalar(size) else tuple(size)
    if t < 0:
        raise LevyError("time must be non-negative")
    out = np.full(shape, G.identity, dtype=np.int64)
    lam = m.total_rate
    if t == 0 or lam == 0:
        return int(out) if size is None else out
    counts = rng.poisson(lam * t, size=shape)
    nu = m.jump_law()
    flat_out = out.reshape(-1)
    flat_counts = np.asarray(counts).reshape(-1)
    for k in range(int(flat_counts.max(initial=0))):
        active = np.flatnonzero(flat_counts > k)
        jumps = rng.choice(G.order, size=active.size, p=nu)
        flat_out[active] = G.mul[flat_out[active], jumps]
    out = flat_out.reshape(shape)
    return int(out) if size is None else out


# -- classification -----------------------------------------------------------

def support(m: JumpMeasure) -> frozenset[int]:
    return frozenset(int(g) for g in np.flatnonzero(m.rates > 0))


def invariance_scope(m: JumpMeasure) -> tuple[str, frozenset[int]]:
    """Classify ``m`` as ``"pure"``, ``"self_invariant"`` or ``"neither"``.

    Returns the label together with the subgroup generated by the support.
    """
    G = m.group
    H = subgroup_generated(G, support(m) or {G.identity})
    if m.is_pure():
        return "pure", H
    C = conjugation_table(G)
    conj_by_H = C[sorted(H)]  # rows: conjugation by each h in H
    if np.allclose(m.rates[conj_by_H], m.rates[None, :], rtol=0, atol=1e-12):
        return "self_invariant", H
    return "neither", H


# -- mixing, quasi-invariance, Hölder bound -------------------------------------

@dataclass
class MixingResult:
    n_star: int | None
    trace: list[float]
    degenerate: bool


def itokawada_mixing(G: FiniteGroup, p, n_max: int, tol: float) -> MixingResult:
    """Total-variation distance of ``p^{*n}`` to Haar for ``n = 1..n_max``."""
    if isinstance(p, Density):
        p = p.probabilities
    elif isinstance(p, JumpMeasure):
        p = p.jump_law()
    p = np.asarray(p, dtype=float)
    supp = set(int(g) for g in np.flatnonzero(p > 0))
    H = subgroup_generated(G, supp)
    degenerate = G.identity not in supp or len(H) != G.order
    u = uniform(G)
    trace, n_star = [], None
    q = point_mass(G, G.identity)
    for n in range(1, n_max + 1):
        q = convolve(G, q, p)
        d = tv_distance(q, u)
        trace.append(d)
        if n_star is None and d < tol:
            n_star = n
    return MixingResult(n_star, trace, degenerate)


def quasi_invariance_check(m: Density, nu: Density, n_max: int, tol: float = 1e-10) -> bool:
    """Whether the conjugation average of ``m^{*n}`` equals ``nu^{*n}`` for ``n <= n_max``."""
    G = m.group
    if nu.group is not G:
        raise LevyError("measures live on different groups")
    pm = point_mass(G, G.identity)
    pn = point_mass(G, G.identity)
    for _ in range(n_max):
        pm = convolve(G, pm, m.probabilities)
        pn = convolve(G, pn, nu.probabilities)
        if tv_distance(conjugation_average(G, pm), pn) > tol:
            return False
    return True


def holder_check(m: JumpMeasure, times: Sequence[float]) -> tuple[bool, float]:
    """Smallest ``K`` with ``1 - Q_t(e) <= K sqrt(t)`` on the given times."""
    times = np.asarray(times, dtype=float)
    if (times <= 0).any():
        raise LevyError("times must be positive")
    G = m.group
    gaps = np.array([1.0 - semigroup_density(m, t).probabilities[G.identity] for t in times])
    K = float(np.max(np.maximum(gaps, 0.0) / np.sqrt(times))) if len(times) else 0.0
    return bool(np.all(gaps <= K * np.sqrt(times) + 1e-15)), K


# -- the circle group ---------------------------------------------------------

class CircleGroup:
    """U(1) as angles in ``[0, 2*pi)``."""

    name = "U1"
    identity = 0.0
    order = None

    def mul_arrays(self, a, b):
        return np.mod(np.asarray(a) + np.asarray(b), TWO_PI)

    def inv_arrays(self, a):
        return np.mod(-np.asarray(a), TWO_PI)

    def identity_array(self, shape) -> np.ndarray:
        return np.zeros(shape)

    def is_abelian(self) -> bool:
        return True

    def label(self, theta) -> str:
        return repr(float(theta))

    def __repr__(self) -> str:
        return "CircleGroup()"


CIRCLE = CircleGroup()


@dataclass(frozen=True)
class CircleLevy:
    """Brownian motion on the circle with speed ``variance_rate`` and drift ``drift``."""

    variance_rate: float = 1.0
    drift: float = 0.0

    def __post_init__(self):
        if not self.variance_rate > 0:
            raise LevyError("variance_rate must be positive")

    @property
    def group(self) -> CircleGroup:
        return CIRCLE

    def is_pure(self) -> bool:
        return True

    def density(self, t: float, theta):
        return circle_density(self, t, theta)

    def sample(self, t: float, rng: np.random.Generator, size=None):
        return circle_sample(self, t, rng, size)


def circle_density(c: CircleLevy, t: float, theta):
    """Wrapped normal density (w.r.t. Lebesgue on ``[0, 2*pi)``) of the angle at time ``t``."""
    if t < 0:
        raise LevyError("time must be non-negative")
    theta = np.asarray(theta, dtype=float)
    if t == 0:
        raise LevyError("the time-zero law is a point mass and has no density")
    var = c.variance_rate * t
    sd = math.sqrt(var)
    x = np.mod(theta - c.drift * t + math.pi, TWO_PI) - math.pi
    total = stats.norm.pdf(x, scale=sd)
    k = 1
    while True:
        term = stats.norm.pdf(x + TWO_PI * k, scale=sd) + stats.norm.pdf(x - TWO_PI * k, scale=sd)
        total = total + term
        if np.max(term) < 1e-14:
            break
        k += 1
    return total


def circle_sample(c: CircleLevy, t: float, rng: np.random.Generator, size=None):
    if t < 0:
        raise LevyError("time must be non-negative")
    x = rng.normal(c.drift * t, math.sqrt(c.variance_rate * t), size=size)
    return np.mod(x, TWO_PI)


def build_levy(desc, group: FiniteGroup | None = None):
    """Build a Lévy process from a config descriptor.

    ``{"group": ..., "jumps": {label: rate}}`` gives a :class:`JumpMeasure`;
    ``{"circle": {"sigma2": x, "drift": D}}`` gives a :class:`CircleLevy`.
    A missing ``jumps`` entry means rate 1 on every non-identity element.
    """
    if isinstance(desc, (JumpMeasure, CircleLevy)):
        return desc
    if "circle" in desc:
        c = desc["circle"] or {}
        return CircleLevy(float(c.get("sigma2", 1.0)), float(c.get("drift", 0.0)))
    G = build_group(desc["group"]) if "group" in desc else group
    if G is None:
        raise LevyError("Lévy descriptor needs a group")
    if desc.get("jumps") is None:
        return JumpMeasure.class_function(G)
    return JumpMeasure.from_labels(G, desc["jumps"])
