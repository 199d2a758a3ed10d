"""Exact probability measures on finite products of chains.

A point of ``ChainProductSpace((k_1, ..., k_n))`` is a tuple ``eta`` with
``0 <= eta[i] < k_i``; the space carries the coordinatewise order. Masses are
``Fraction`` objects and only strictly positive entries are stored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping

from ._rational import fmt, scale_to_ints, to_fraction
from .errors import CapExceededError, DimensionError, ZeroProbabilityError


@dataclass(frozen=True)
class ChainProductSpace:
    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(k) for k in self.sizes)
        if not sizes:
            raise DimensionError("a chain product needs at least one coordinate")
        if any(k < 1 for k in sizes):
            raise DimensionError(f"chain sizes must be positive, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def binary(cls, n: int) -> "ChainProductSpace":
        return cls((2,) * n)

    @property
    def ndim(self) -> int:
        return len(self.sizes)

    @property
    def is_binary(self) -> bool:
        return all(k == 2 for k in self.sizes)

    def __len__(self):
        total = 1
        for k in self.sizes:
            total *= k
        return total

    def points(self):
        return itertools.product(*(range(k) for k in self.sizes))

    def __contains__(self, eta) -> bool:
        return (len(eta) == self.ndim
                and all(0 <= x < k for x, k in zip(eta, self.sizes)))

    def sub(self, coords) -> "ChainProductSpace":
        return ChainProductSpace(tuple(self.sizes[i] for i in coords))


def leq(x, y) -> bool:
    """Coordinatewise order."""
    return all(a <= b for a, b in zip(x, y))


class FiniteMeasure:
    """A probability measure on a ``ChainProductSpace`` with exact masses."""

    __slots__ = ("space", "mass")

    def __init__(self, space, mass: Mapping):
        if not isinstance(space, ChainProductSpace):
            space = ChainProductSpace(tuple(space))
        clean = {}
        for eta, p in mass.items():
            eta = tuple(int(x) for x in eta)
            p = to_fraction(p)
            if p < 0:
                raise ValueError(f"negative mass {p} at {eta}")
            if eta not in space:
                raise DimensionError(f"outcome {eta} outside space {space.sizes}")
            if p:
                clean[eta] = clean.get(eta, Fraction(0)) + p
        if not clean:
            raise ZeroProbabilityError("measure has empty support")
        total = sum(clean.values())
        if total != 1:
            raise ValueError(f"masses sum to {total}, not 1")
        self.space = space
        self.mass = clean

    @classmethod
    def from_weights(cls, space, weights: Mapping) -> "FiniteMeasure":
        """Normalize nonnegative weights (ints or rationals) into a measure."""
        total = sum(weights.values())
        if total == 0:
            raise ZeroProbabilityError("total weight zero")
        return cls(space, {k: Fraction(v) / total for k, v in weights.items() if v})

    @classmethod
    def point_mass(cls, space, eta) -> "FiniteMeasure":
        return cls(space, {tuple(eta): Fraction(1)})

    @classmethod
    def uniform(cls, space) -> "FiniteMeasure":
        if not isinstance(space, ChainProductSpace):
            space = ChainProductSpace(tuple(space))
        p = Fraction(1, len(space))
        return cls(space, {eta: p for eta in space.points()})

    @classmethod
    def product(cls, marginals) -> "FiniteMeasure":
        """Product of one-dimensional laws given as sequences of masses."""
        marginals = [[to_fraction(p) for p in law] for law in marginals]
        space = ChainProductSpace(tuple(len(law) for law in marginals))
        mass = {}
        for eta in space.points():
            p = Fraction(1)
            for law, x in zip(marginals, eta):
                p *= law[x]
            if p:
                mass[eta] = p
        return cls(space, mass)

    # -- basic queries -------------------------------------------------

    @property
    def ndim(self) -> int:
        return self.space.ndim

    def __getitem__(self, eta) -> Fraction:
        return self.mass.get(tuple(eta), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, FiniteMeasure):
            return NotImplemented
        return self.space == other.space and self.mass == other.mass

    def __repr__(self):
        body = ", ".join(f"{k}: {fmt(v)}" for k, v in sorted(self.mass.items()))
        return f"FiniteMeasure(space={self.space.sizes}, {{{body}}})"

    def support(self):
        return sorted(self.mass)

    def prob(self, event) -> Fraction:
        """Probability of an event: a predicate, a MonotoneEvent, or a set of points."""
        if callable(event):
            return sum((p for eta, p in self.mass.items() if event(eta)), Fraction(0))
        return sum((p for eta, p in self.mass.items() if eta in event), Fraction(0))

    def expect(self, fn: Callable) -> Fraction:
        return sum((p * fn(eta) for eta, p in self.mass.items()), Fraction(0))

    def marginal(self, coords) -> "FiniteMeasure":
        coords = tuple(coords)
        out = {}
        for eta, p in self.mass.items():
            key = tuple(eta[i] for i in coords)
            out[key] = out.get(key, Fraction(0)) + p
        return FiniteMeasure(self.space.sub(coords), out)

    def pushforward(self, fn: Callable, space) -> "FiniteMeasure":
        out = {}
        for eta, p in self.mass.items():
            key = tuple(fn(eta))
            out[key] = out.get(key, Fraction(0)) + p
        return FiniteMeasure(space, out)

    def rank_sequence(self):
        """(r_0, ..., r_n) with r_i = mu(|eta| = i); binary spaces only."""
        if not self.space.is_binary:
            raise DimensionError("rank sequence is defined on {0,1}^n")
        ranks = [Fraction(0)] * (self.ndim + 1)
        for eta, p in self.mass.items():
            ranks[sum(eta)] += p
        return ranks

    def scaled(self):
        """Integer masses and their common denominator: (dict, D)."""
        keys = list(self.mass)
        ints, d = scale_to_ints([self.mass[k] for k in keys])
        return dict(zip(keys, ints)), d

    # -- transformations -------------------------------------------------

    def condition(self, fixing: Mapping) -> "FiniteMeasure":
        return condition(self, fixing)

    def external_field(self, weights) -> "FiniteMeasure":
        return external_field(self, weights)

    def to_dict(self) -> dict:
        return {"space": list(self.space.sizes),
                "mass": {",".join(map(str, k)): fmt(v)
                         for k, v in sorted(self.mass.items())}}

    @classmethod
    def from_dict(cls, data: Mapping) -> "FiniteMeasure":
        mass = {}
        for key, value in data["mass"].items():
            key = key.strip("()[] ")
            eta = tuple(int(x) for x in key.split(",") if x.strip() != "")
            mass[eta] = to_fraction(value)
        return cls(ChainProductSpace(tuple(data["space"])), mass)


def condition(mu: FiniteMeasure, fixing: Mapping) -> FiniteMeasure:
    """Condition on ``eta[i] == v`` for each ``i: v`` in ``fixing``.

    The result lives on the free coordinates, kept in their original order.

    Raises:
        ZeroProbabilityError: if the fixed pattern has zero mass.
        DimensionError: if no coordinate would remain free.
    """
    fixing = {int(i): int(v) for i, v in fixing.items()}
    free = [i for i in range(mu.ndim) if i not in fixing]
    if not free:
        raise DimensionError("cannot condition on every coordinate")
    kept = {}
    for eta, p in mu.mass.items():
        if all(eta[i] == v for i, v in fixing.items()):
            key = tuple(eta[i] for i in free)
            kept[key] = kept.get(key, Fraction(0)) + p
    if not kept:
        raise ZeroProbabilityError(f"fixing {fixing} has probability zero")
    return FiniteMeasure.from_weights(mu.space.sub(free), kept)


def external_field(mu: FiniteMeasure, weights) -> FiniteMeasure:
    """Reweight ``mu(eta)`` by ``prod_i W_i ** eta_i`` and renormalize."""
    if not mu.space.is_binary:
        raise DimensionError("external fields are defined on {0,1}^n")
    weights = [to_fraction(w) for w in weights]
    if len(weights) != mu.ndim:
        raise DimensionError(f"field has {len(weights)} entries, measure has {mu.ndim}")
    if any(w < 0 for w in weights):
        raise ValueError("field weights must be nonnegative")
    out = {}
    for eta, p in mu.mass.items():
        w = p
        for wi, x in zip(weights, eta):
            if x:
                w *= wi
        if w:
            out[eta] = w
    if not out:
        raise ZeroProbabilityError("external field kills all mass")
    return FiniteMeasure.from_weights(mu.space, out)


def partial_fixings(mu: FiniteMeasure, min_free: int = 2):
    """Yield every positive-probability fixing leaving >= ``min_free`` coordinates free.

    The empty fixing comes first.
    """
    n = mu.ndim
    for r in range(0, n - min_free + 1):
        for coords in itertools.combinations(range(n), r):
            seen = set()
            for eta in mu.mass:
                seen.add(tuple(eta[i] for i in coords))
            for values in sorted(seen):
                yield dict(zip(coords, values))


# -- monotone events --------------------------------------------------------

def upsets(sizes, cap: int | None = None):
    """Enumerate every up-set of the chain product with the given sizes.

    Up-sets are yielded as bitmasks over ``points`` (row-major order of
    ``itertools.product``). Returns ``(points, masks)``.

    Raises:
        CapExceededError: if more than ``cap`` up-sets exist.
    """
    points = list(itertools.product(*(range(k) for k in sizes)))
    index = {p: i for i, p in enumerate(points)}
    # upper covers of each point
    covers = []
    for p in points:
        ups = []
        for i, k in enumerate(sizes):
            if p[i] + 1 < k:
                q = p[:i] + (p[i] + 1,) + p[i + 1:]
                ups.append(index[q])
        covers.append(ups)
    order = sorted(range(len(points)), key=lambda i: -sum(points[i]))
    masks = []

    def rec(pos, mask):
        if pos == len(order):
            masks.append(mask)
            if cap is not None and len(masks) > cap:
                raise CapExceededError(f"more than {cap} up-sets on sizes {tuple(sizes)}")
            return
        i = order[pos]
        rec(pos + 1, mask)
        if all(mask >> j & 1 for j in covers[i]):
            rec(pos + 1, mask | (1 << i))

    rec(0, 0)
    return points, masks


def minimal_elements(points) -> list:
    points = sorted(set(map(tuple, points)))
    return [p for p in points
            if not any(q != p and leq(q, p) for q in points)]


class MonotoneEvent:
    """Increasing event on a chain product, stored by its minimal elements."""

    def __init__(self, space, generators):
        if not isinstance(space, ChainProductSpace):
            space = ChainProductSpace(tuple(space))
        gens = [tuple(g) for g in generators]
        for g in gens:
            if g not in space:
                raise DimensionError(f"generator {g} outside space")
        self.space = space
        self.generators = tuple(minimal_elements(gens))
        self._affecting = None

    @classmethod
    def from_points(cls, space, points) -> "MonotoneEvent":
        """Build from an arbitrary point set, which must already be an up-set."""
        points = set(map(tuple, points))
        ev = cls(space, minimal_elements(points))
        if set(ev.points()) != points:
            raise ValueError("point set is not increasing")
        return ev

    def __contains__(self, eta) -> bool:
        return any(leq(g, eta) for g in self.generators)

    def points(self):
        return [eta for eta in self.space.points() if eta in self]

    @property
    def affecting(self) -> frozenset:
        """Coordinates i such that flipping only eta_i can change membership."""
        if self._affecting is None:
            aff = set()
            for eta in self.space.points():
                inside = eta in self
                for i, k in enumerate(self.space.sizes):
                    if i in aff:
                        continue
                    for v in range(k):
                        if v != eta[i]:
                            tau = eta[:i] + (v,) + eta[i + 1:]
                            if (tau in self) != inside:
                                aff.add(i)
                                break
            self._affecting = frozenset(aff)
        return self._affecting

    def independent_of(self, other: "MonotoneEvent") -> bool:
        """True when no coordinate affects both events."""
        return not (self.affecting & other.affecting)

    def __repr__(self):
        return f"MonotoneEvent({self.generators})"


def rank_sequence(mu: FiniteMeasure):
    return mu.rank_sequence()


def binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def outcomes_key(eta: Iterable[int]) -> str:
    return ",".join(map(str, eta))
