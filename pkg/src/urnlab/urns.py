"""Exact laws for the competing-urns model.

Ball ``i`` lands in urn ``j`` with probability proportional to ``gamma[i][j]``,
independently over balls. Balls and urns are 0-indexed throughout.

Every law here comes from one ball-at-a-time dynamic program over "block"
counts: a block is a set of urns, and the DP tracks how many balls fell in
each block, collapsing counts above a per-block cap into the cap state.
Weights are integers (each row of gamma is scaled by its own common
denominator, which does not change the law) and normalization happens once
at the end.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from ._rational import fmt, to_fraction
from .errors import CapExceededError, DimensionError, ZeroProbabilityError
from .measures import ChainProductSpace, FiniteMeasure

ENUMERATION_CAP = 10 ** 7
STATE_CAP = 10 ** 6


class UrnModel:
    """The weight matrix gamma (m balls x n urns) of nonnegative rationals."""

    __slots__ = ("gamma", "_int_rows")

    def __init__(self, gamma: Sequence[Sequence]):
        rows = tuple(tuple(to_fraction(x) for x in row) for row in gamma)
        if not rows or not rows[0]:
            raise DimensionError("gamma must have at least one row and one column")
        n = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != n:
                raise DimensionError(f"row {i} has {len(row)} entries, expected {n}")
            if any(x < 0 for x in row):
                raise ValueError(f"row {i} has a negative weight")
            if not any(row):
                raise ZeroProbabilityError(f"total weight zero: row {i} is all zeros")
        self.gamma = rows
        self._int_rows = None

    @classmethod
    def uniform(cls, m: int, n: int) -> "UrnModel":
        return cls([[1] * n for _ in range(m)])

    @classmethod
    def iid(cls, m: int, weights: Sequence) -> "UrnModel":
        return cls([list(weights) for _ in range(m)])

    @property
    def m(self) -> int:
        return len(self.gamma)

    @property
    def n(self) -> int:
        return len(self.gamma[0])

    @property
    def iid_flag(self) -> bool:
        """True iff all rows are identical (recomputed every time)."""
        first = self.gamma[0]
        return all(row == first for row in self.gamma[1:])

    def int_rows(self) -> tuple:
        """Rows scaled to integers, one common denominator per row."""
        if self._int_rows is None:
            out = []
            for row in self.gamma:
                d = 1
                for x in row:
                    d = lcm(d, x.denominator)
                out.append(tuple(int(x * d) for x in row))
            self._int_rows = tuple(out)
        return self._int_rows

    def restrict(self, balls: Iterable[int]) -> "UrnModel":
        """The model on the given subset of balls (the measure Pr^L)."""
        return UrnModel([self.gamma[i] for i in sorted(balls)])

    def merge_urns(self, groups: Sequence[Iterable[int]]) -> "UrnModel":
        """Model whose urn ``g`` is the union of the original urns in ``groups[g]``."""
        groups = [list(g) for g in groups]
        return UrnModel([[sum((row[j] for j in g), Fraction(0)) for g in groups]
                         for row in self.gamma])

    def normalized(self) -> "UrnModel":
        return UrnModel([[x / sum(row) for x in row] for row in self.gamma])

    def __eq__(self, other):
        return isinstance(other, UrnModel) and self.gamma == other.gamma

    def __hash__(self):
        return hash(self.gamma)

    def __repr__(self):
        rows = "; ".join(" ".join(fmt(x) for x in row) for row in self.gamma)
        return f"UrnModel(m={self.m}, n={self.n}, [{rows}])"

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n,
                "gamma": [[fmt(x) for x in row] for row in self.gamma]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "UrnModel":
        model = cls(data["gamma"])
        if "m" in data and data["m"] != model.m:
            raise DimensionError(f"m={data['m']} but gamma has {model.m} rows")
        if "n" in data and data["n"] != model.n:
            raise DimensionError(f"n={data['n']} but gamma has {model.n} columns")
        return model


def weight(model: UrnModel, sigma: Sequence[int]) -> Fraction:
    """Unnormalized weight prod_i gamma[i][sigma[i]] of an assignment."""
    if len(sigma) != model.m:
        raise DimensionError(f"assignment has {len(sigma)} balls, model has {model.m}")
    w = Fraction(1)
    for i, j in enumerate(sigma):
        if not 0 <= j < model.n:
            raise DimensionError(f"ball {i} sent to nonexistent urn {j}")
        w *= model.gamma[i][j]
    return w


def occupancy(sigma: Sequence[int], n: int) -> tuple:
    """(B_0, ..., B_{n-1}) for an assignment."""
    counts = [0] * n
    for j in sigma:
        counts[j] += 1
    return tuple(counts)


def assignment_law_oracle(model: UrnModel, cap: int = ENUMERATION_CAP) -> FiniteMeasure:
    """Brute-force law of sigma over all n**m assignments."""
    if model.n ** model.m > cap:
        raise CapExceededError(f"n^m = {model.n ** model.m} exceeds cap {cap}")
    weights = {}
    for sigma in itertools.product(range(model.n), repeat=model.m):
        w = weight(model, sigma)
        if w:
            weights[sigma] = w
    return FiniteMeasure.from_weights(ChainProductSpace((model.n,) * model.m), weights)


# -- the block-count dynamic program -----------------------------------------

def block_weights(rows, blocks, caps, max_states: int = STATE_CAP) -> dict:
    """Unnormalized joint weights of capped block counts.

    Args:
        rows: per-ball integer (or rational) weight rows.
        blocks: list of urn collections; a ball in urn ``j`` increments every
            block containing ``j``.
        caps: per-block cap; counts above it are stored as the cap.

    Returns:
        dict mapping count tuples to total weight.
    """
    rows = list(rows)
    nb = len(blocks)
    if not rows:
        return {(0,) * nb: 1}
    n = len(rows[0])
    blocks = [frozenset(b) for b in blocks]
    groups = defaultdict(list)
    for j in range(n):
        groups[tuple(b for b in range(nb) if j in blocks[b])].append(j)
    groups = list(groups.items())
    states = {(0,) * nb: 1}
    for row in rows:
        moves = []
        for sig, urns in groups:
            w = sum(row[j] for j in urns)
            if w:
                moves.append((sig, w))
        new = defaultdict(int)
        for st, wt in states.items():
            for sig, w in moves:
                if sig:
                    st2 = list(st)
                    for b in sig:
                        if st2[b] < caps[b]:
                            st2[b] += 1
                    new[tuple(st2)] += wt * w
                else:
                    new[st] += wt * w
        states = new
        if len(states) > max_states:
            raise CapExceededError(f"DP state space {len(states)} exceeds {max_states}")
    return dict(states)


def _as_blocks(model: UrnModel, blocks):
    if blocks is None:
        return [(j,) for j in range(model.n)]
    out = []
    for b in blocks:
        b = (b,) if isinstance(b, int) else tuple(b)
        if any(not 0 <= j < model.n for j in b):
            raise DimensionError(f"block {b} names a nonexistent urn")
        out.append(b)
    return out


def occupancy_law(model: UrnModel, blocks=None, caps=None,
                  max_states: int = STATE_CAP) -> FiniteMeasure:
    """Joint law of block counts ``|sigma^{-1}(block)|``, capped per block.

    With the defaults this is the law of (B_0, ..., B_{n-1}). Coordinate ``b``
    of the result ranges over ``0..caps[b]``; the top value means "at least
    caps[b]".
    """
    blocks = _as_blocks(model, blocks)
    caps = [model.m] * len(blocks) if caps is None else [min(int(c), model.m) for c in caps]
    if len(caps) != len(blocks):
        raise DimensionError("one cap per block required")
    if any(c < 0 for c in caps):
        raise ValueError("caps must be nonnegative")
    weights = block_weights(model.int_rows(), blocks, caps, max_states)
    return FiniteMeasure.from_weights(ChainProductSpace(tuple(c + 1 for c in caps)), weights)


def _check_window(model, a, b):
    if len(a) != model.n - 1 or len(b) != model.n - 1:
        raise DimensionError(f"windows need {model.n - 1} entries")
    if any(x < 0 for x in a) or any(x < 0 for x in b):
        raise ValueError("window bounds must be nonnegative")


def window_weights(model: UrnModel, a, b) -> list:
    """Unnormalized weights of {B_last = k} ∩ {a_j <= B_j <= b_j, j < n-1}, k = 0..m."""
    _check_window(model, a, b)
    n, m = model.n, model.m
    blocks = [(j,) for j in range(n - 1)] + [(n - 1,)]
    caps = [min(bj + 1, m) for bj in b] + [m]
    seq = [0] * (m + 1)
    for st, w in block_weights(model.int_rows(), blocks, caps).items():
        if all(a[j] <= st[j] <= b[j] for j in range(n - 1)):
            seq[st[-1]] += w
    return seq


def window_law(model: UrnModel, a, b) -> list:
    """(p(0,a,b), ..., p(m,a,b)): law of the last urn's count given the windows."""
    seq = window_weights(model, a, b)
    total = sum(seq)
    if total == 0:
        raise ZeroProbabilityError(f"window a={tuple(a)}, b={tuple(b)} has probability zero")
    return [Fraction(w, total) for w in seq]


def p_window(model: UrnModel, k: int, a, b) -> Fraction:
    """p(k,a,b) = Pr(B_last = k | a_j <= B_j <= b_j for every other urn j)."""
    law = window_law(model, a, b)
    return law[k] if 0 <= k < len(law) else Fraction(0)


# -- conditioning events and the (X, Y) law -----------------------------------

@dataclass(frozen=True)
class ConditioningEvent:
    """{S_j <= B_j <= T_j for j in K}, stored as ``{j: (S_j, T_j)}``."""

    windows: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for j, (s, t) in dict(self.windows).items():
            j, s, t = int(j), int(s), int(t)
            if not 0 <= s <= t:
                raise ValueError(f"window for urn {j} must satisfy 0 <= S <= T, got [{s}, {t}]")
            clean[j] = (s, t)
        object.__setattr__(self, "windows", dict(sorted(clean.items())))

    @property
    def urns(self) -> frozenset:
        return frozenset(self.windows)

    def admits(self, counts) -> bool:
        return all(s <= counts[j] <= t for j, (s, t) in self.windows.items())

    def validate(self, model: UrnModel) -> "ConditioningEvent":
        """Raise unless every window fits the model and the event is possible."""
        for j, (s, t) in self.windows.items():
            if not 0 <= j < model.n:
                raise DimensionError(f"urn {j} out of range")
            if t > model.m:
                raise ValueError(f"window upper bound {t} exceeds m={model.m}")
        if event_weight(model, self) == 0:
            raise ZeroProbabilityError(f"conditioning event {self.windows} has probability zero")
        return self

    @classmethod
    def from_levels(cls, spec: "IntervalSpec", levels: Mapping) -> "ConditioningEvent":
        """Q = {X_j = t_j for j in K} rewritten as count windows."""
        out = {}
        for j, t in levels.items():
            cuts = spec.cuts[j]
            out[j] = (cuts[t], cuts[t + 1] - 1)
        return cls(out)

    def to_dict(self) -> dict:
        return {str(j): [s, t] for j, (s, t) in self.windows.items()}


def event_weight(model: UrnModel, Q: ConditioningEvent) -> int:
    urns = sorted(Q.urns)
    if not urns:
        return _total(model)
    caps = [min(Q.windows[j][1] + 1, model.m) for j in urns]
    total = 0
    for st, w in block_weights(model.int_rows(), [(j,) for j in urns], caps).items():
        if all(Q.windows[j][0] <= c <= Q.windows[j][1] for j, c in zip(urns, st)):
            total += w
    return total


def _total(model: UrnModel) -> int:
    total = 1
    for row in model.int_rows():
        total *= sum(row)
    return total


def event_prob(model: UrnModel, Q: ConditioningEvent) -> Fraction:
    return Fraction(event_weight(model, Q), _total(model))


class JointXYLaw:
    """Law of (X, Y) = (|sigma^{-1}(I)|, |sigma^{-1}(J)|), usually given Q."""

    def __init__(self, table: Mapping, I=(), J=()):
        self.table = {(int(k), int(l)): to_fraction(p) for (k, l), p in table.items() if p}
        if any(p < 0 for p in self.table.values()):
            raise ValueError("negative mass")
        if sum(self.table.values()) != 1:
            raise ValueError("joint law does not sum to 1")
        self.I = tuple(I)
        self.J = tuple(J)

    def __getitem__(self, kl) -> Fraction:
        return self.table.get(tuple(kl), Fraction(0))

    @property
    def kmax(self) -> int:
        return max(k for k, _ in self.table)

    @property
    def lmax(self) -> int:
        return max(l for _, l in self.table)

    def x_law(self) -> dict:
        out = defaultdict(Fraction)
        for (k, _), p in self.table.items():
            out[k] += p
        return dict(out)

    def mu(self, k: int) -> dict:
        """mu_k(l) = Pr(Y = l | X = k)."""
        px = self.x_law().get(k, Fraction(0))
        if px == 0:
            raise ZeroProbabilityError(f"Pr(X = {k}) = 0")
        return {l: p / px for (kk, l), p in self.table.items() if kk == k}

    def z_law(self, length: int | None = None) -> list:
        """(Pr(Z = 0), Pr(Z = 1), ...) for Z = X + Y."""
        top = max(k + l for k, l in self.table)
        length = top + 1 if length is None else max(length, top + 1)
        seq = [Fraction(0)] * length
        for (k, l), p in self.table.items():
            seq[k + l] += p
        return seq

    def support(self):
        return sorted(self.table)

    def __eq__(self, other):
        return isinstance(other, JointXYLaw) and self.table == other.table

    def __repr__(self):
        body = ", ".join(f"{k}: {fmt(v)}" for k, v in sorted(self.table.items()))
        return f"JointXYLaw({{{body}}})"

    def to_dict(self) -> dict:
        return {"I": list(self.I), "J": list(self.J),
                "table": {f"{k},{l}": fmt(p) for (k, l), p in sorted(self.table.items())}}


def xy_weights(model: UrnModel, Q: ConditioningEvent, I, J) -> dict:
    """Unnormalized weights of (X, Y) on the event Q."""
    I, J, K = set(I), set(J), set(Q.urns)
    if I & J or I & K or J & K:
        raise ValueError("I, J and K must be pairwise disjoint")
    if I | J | K != set(range(model.n)):
        raise ValueError("I, J and K must cover every urn")
    urns = sorted(K)
    blocks = [tuple(sorted(I)), tuple(sorted(J))] + [(j,) for j in urns]
    caps = [model.m, model.m] + [min(Q.windows[j][1] + 1, model.m) for j in urns]
    out = defaultdict(int)
    for st, w in block_weights(model.int_rows(), blocks, caps).items():
        if all(Q.windows[j][0] <= c <= Q.windows[j][1] for j, c in zip(urns, st[2:])):
            out[st[0], st[1]] += w
    return dict(out)


def conditional_xy_law(model: UrnModel, Q: ConditioningEvent, I, J) -> JointXYLaw:
    """Exact law of (X, Y) given Q, where I, J and Q's urns partition the urns."""
    weights = xy_weights(model, Q, I, J)
    total = sum(weights.values())
    if total == 0:
        raise ZeroProbabilityError(f"conditioning event {Q.windows} has probability zero")
    return JointXYLaw({kl: Fraction(w, total) for kl, w in weights.items()},
                      tuple(sorted(I)), tuple(sorted(J)))


# -- interval and threshold urn measures --------------------------------------

class IntervalSpec:
    """Per-urn cut sequences 0 = a_0 < a_1 < ... < a_k = m + 1.

    ``X_j = t`` iff ``a_t(j) <= B_j < a_{t+1}(j)``. Threshold specs
    (``from_thresholds``) use one interior cut per urn and may put it at 0 or
    beyond m, which makes the indicator constant.
    """

    def __init__(self, m: int, cuts: Sequence[Sequence[int]]):
        self.m = int(m)
        full = []
        for j, c in enumerate(cuts):
            c = tuple(int(x) for x in c)
            if len(c) < 2 or c[0] != 0 or c[-1] != self.m + 1:
                raise ValueError(f"cuts for urn {j} must start at 0 and end at m+1={self.m + 1}")
            if any(x >= y for x, y in zip(c, c[1:])):
                raise ValueError(f"cuts for urn {j} must strictly increase: {c}")
            full.append(c)
        self.cuts = tuple(full)
        self.interior = tuple(c[1:-1] for c in full)
        self.thresholds = None

    @classmethod
    def from_thresholds(cls, m: int, thresholds: Sequence[int]) -> "IntervalSpec":
        spec = cls.__new__(cls)
        spec.m = int(m)
        ts = tuple(int(t) for t in thresholds)
        if any(t < 0 for t in ts):
            raise ValueError("thresholds must be nonnegative")
        spec.thresholds = ts
        spec.interior = tuple((t,) for t in ts)
        spec.cuts = tuple((0, t, m + 1) for t in ts)
        return spec

    @classmethod
    def identity(cls, m: int, n: int) -> "IntervalSpec":
        return cls(m, [tuple(range(m + 2))] * n)

    @property
    def n(self) -> int:
        return len(self.interior)

    @property
    def levels(self) -> tuple:
        return tuple(len(c) + 1 for c in self.interior)

    def level(self, j: int, count: int) -> int:
        return sum(1 for c in self.interior[j] if c <= count)

    def caps(self) -> list:
        return [max(c) if c else 0 for c in self.interior]

    def to_dict(self) -> dict:
        if self.thresholds is not None:
            return {"thresholds": list(self.thresholds)}
        return {"intervals": {str(j): list(c) for j, c in enumerate(self.cuts)}}

    def __repr__(self):
        if self.thresholds is not None:
            return f"IntervalSpec.from_thresholds({self.m}, {self.thresholds})"
        return f"IntervalSpec({self.m}, {self.cuts})"


def interval_urn_measure(model: UrnModel, spec: IntervalSpec,
                         max_states: int = STATE_CAP) -> FiniteMeasure:
    """Exact law of (X_0, ..., X_{n-1}) for the given cuts or thresholds."""
    if spec.n != model.n:
        raise DimensionError(f"spec covers {spec.n} urns, model has {model.n}")
    if spec.m != model.m:
        raise DimensionError(f"spec built for m={spec.m}, model has m={model.m}")
    caps = [min(c, model.m) for c in spec.caps()]
    weights = block_weights(model.int_rows(), [(j,) for j in range(model.n)], caps, max_states)
    out = defaultdict(int)
    for st, w in weights.items():
        out[tuple(spec.level(j, c) for j, c in enumerate(st))] += w
    return FiniteMeasure.from_weights(ChainProductSpace(spec.levels), out)


def threshold_urn_measure(model: UrnModel, thresholds) -> FiniteMeasure:
    return interval_urn_measure(model, IntervalSpec.from_thresholds(model.m, thresholds))


# -- increasing families and tail events --------------------------------------

class IncreasingFamily:
    """Up-closed family of subsets of range(m), stored by its minimal sets."""

    def __init__(self, m: int, minimal: Iterable[Iterable[int]]):
        self.m = int(m)
        sets = {frozenset(s) for s in minimal}
        for s in sets:
            if any(not 0 <= i < self.m for i in s):
                raise DimensionError(f"set {sorted(s)} not inside range({m})")
        self.minimal = tuple(sorted((s for s in sets if not any(t < s for t in sets)),
                                    key=lambda s: (len(s), sorted(s))))

    @classmethod
    def everything(cls, m: int) -> "IncreasingFamily":
        return cls(m, [()])

    @classmethod
    def nothing(cls, m: int) -> "IncreasingFamily":
        return cls(m, [])

    @classmethod
    def at_least(cls, m: int, k: int) -> "IncreasingFamily":
        return cls(m, itertools.combinations(range(m), k))

    @classmethod
    def generated_by(cls, m: int, sets) -> "IncreasingFamily":
        return cls(m, sets)

    def __contains__(self, S) -> bool:
        S = frozenset(S)
        return any(g <= S for g in self.minimal)

    def members(self):
        for r in range(self.m + 1):
            for S in itertools.combinations(range(self.m), r):
                if S in self:
                    yield frozenset(S)

    def to_dict(self) -> dict:
        return {"m": self.m, "minimal": [sorted(s) for s in self.minimal]}

    def __repr__(self):
        return f"IncreasingFamily({self.m}, {[sorted(s) for s in self.minimal]})"


def subset_window_weights(model: UrnModel, a, b, cap: int = ENUMERATION_CAP) -> dict:
    """Weight of {sigma^{-1}(last) = S} ∩ windows, for every S ⊆ range(m)."""
    _check_window(model, a, b)
    m, n = model.m, model.n
    if 2 ** m > cap:
        raise CapExceededError(f"2^m = {2 ** m} exceeds cap {cap}")
    rows = model.int_rows()
    blocks = [(j,) for j in range(n - 1)]
    caps = [min(bj + 1, m) for bj in b]
    out = {}
    for r in range(m + 1):
        for S in itertools.combinations(range(m), r):
            head = 1
            for i in S:
                head *= rows[i][n - 1]
            if not head:
                continue
            rest = [rows[i][:n - 1] for i in range(m) if i not in S]
            tail = 0
            for st, w in block_weights(rest, blocks, caps).items():
                if all(a[j] <= st[j] <= b[j] for j in range(n - 1)):
                    tail += w
            if tail:
                out[frozenset(S)] = head * tail
    return out


def tail_event_prob(model: UrnModel, family: IncreasingFamily, a, b,
                    cap: int = ENUMERATION_CAP) -> Fraction:
    """p(A,a,b) = Pr(sigma^{-1}(last urn) in A | a_j <= B_j <= b_j for other urns)."""
    if family.m != model.m:
        raise DimensionError("family and model disagree on m")
    weights = subset_window_weights(model, a, b, cap)
    total = sum(weights.values())
    if total == 0:
        raise ZeroProbabilityError(f"window a={tuple(a)}, b={tuple(b)} has probability zero")
    hit = sum(w for S, w in weights.items() if S in family)
    return Fraction(hit, total)
