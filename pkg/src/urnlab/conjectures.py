"""Counterexample reproduction and seeded search campaigns for open questions.

Urns are 0-based throughout: in the three-urn example below the
conditioning urn is 2 and the compared urns are 0 and 1.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from . import verdict as V
from ._rational import to_fraction
from .correlation import check_cna, check_na, check_nc, falsify_fields
from .dominance import check_normalized_matching
from .errors import CapExceededError, DimensionError, ZeroProbabilityError
from .generators import random_interval_spec, random_model
from .measures import ChainProductSpace, FiniteMeasure, external_field
from .urns import (ENUMERATION_CAP, ConditioningEvent, IntervalSpec, UrnModel, block_weights,
                   interval_urn_measure, threshold_urn_measure)


# -- the three-block example --------------------------------------------------

@dataclass(frozen=True)
class WelshInstance:
    """Ground set M ∪ A ∪ B ∪ C with |M| = s and |A| = |B| = |C| = t = s + 3.

    The family I is I1 ∪ I2 where I1 = subsets avoiding M and I2 = sets X with
    |X ∩ M| < 2s/5 meeting at most two of A, B, C. Three urns, each ball
    uniform over them.
    """

    s: int

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be a positive integer")

    @property
    def t(self) -> int:
        return self.s + 3

    @property
    def m(self) -> int:
        return self.s + 3 * self.t

    @property
    def blocks(self) -> dict:
        s, t = self.s, self.t
        return {"M": range(0, s), "A": range(s, s + t), "B": range(s + t, s + 2 * t),
                "C": range(s + 2 * t, s + 3 * t)}

    def small(self, c: int) -> bool:
        """|X ∩ M| = c is below 0.4|M| (strictly)."""
        return 5 * c < 2 * self.s

    def contains(self, X) -> bool:
        X = set(X)
        b = self.blocks
        inM = len(X & set(b["M"]))
        if inM == 0:
            return True
        met = sum(1 for k in "ABC" if X & set(b[k]))
        return self.small(inM) and met <= 2

    @property
    def alpha(self) -> Fraction:
        return Fraction(2, 3) ** self.t


WELSH_C = Fraction(27, 8)


def _onto_count(t: int, k: int) -> int:
    """Maps from t balls into 3 urns whose image contains a fixed k-set."""
    return sum((-1) ** u * comb(k, u) * (3 - u) ** t for u in range(k + 1))


def welsh_counts(inst: WelshInstance) -> dict:
    """Number of assignments in A_L for every L ⊆ {0, 1, 2} (out of 3^m)."""
    s, t = inst.s, inst.t
    status_weight = defaultdict(int)
    fs = factorial(s)
    for c0 in range(s + 1):
        for c1 in range(s - c0 + 1):
            c = (c0, c1, s - c0 - c1)
            st = tuple(0 if x == 0 else (1 if inst.small(x) else 2) for x in c)
            status_weight[st] += fs // (factorial(c[0]) * factorial(c[1]) * factorial(c[2]))
    onto = [_onto_count(t, k) for k in range(4)]
    # blocks A, B, C independently; G(D): no urn of D is hit by all three blocks
    G = {}
    for r in range(4):
        for D in itertools.combinations(range(3), r):
            G[D] = sum((-1) ** k * comb(r, k) * onto[k] ** 3 for k in range(r + 1))
    out = {}
    for r in range(4):
        for L in itertools.combinations(range(3), r):
            total = 0
            for st, w in status_weight.items():
                if any(st[j] == 2 for j in L):
                    continue
                D = tuple(j for j in L if st[j] == 1)
                total += w * G[D]
            out[L] = total
    return out


def welsh_probabilities(inst: WelshInstance, L=None):
    """Pr(A_L) = Pr(sigma^{-1}(j) in I for every j in L); all L when ``L`` is None."""
    if isinstance(inst, int):
        inst = WelshInstance(inst)
    counts = welsh_counts(inst)
    total = 3 ** inst.m
    if L is None:
        return {L: Fraction(c, total) for L, c in counts.items()}
    L = tuple(sorted(set(L)))
    if any(j not in (0, 1, 2) for j in L):
        raise DimensionError("urns are 0, 1, 2")
    return Fraction(counts[L], total)


def welsh_bruteforce(inst: WelshInstance, cap: int = 2 * 10 ** 6) -> dict:
    """Pr(A_L) for every L by enumerating all 3^m assignments (s = 1 only in practice)."""
    if isinstance(inst, int):
        inst = WelshInstance(inst)
    m = inst.m
    if 3 ** m > cap:
        raise CapExceededError(f"3^{m} assignments exceed cap {cap}")
    sigma = np.array(list(itertools.product(range(3), repeat=m)), dtype=np.int8)
    b = inst.blocks
    ok = []
    for j in range(3):
        hit = sigma == j
        inM = hit[:, list(b["M"])].sum(axis=1)
        met = sum(hit[:, list(b[k])].any(axis=1).astype(int) for k in "ABC")
        ok.append((inM == 0) | ((5 * inM < 2 * inst.s) & (met <= 2)))
    out = {}
    total = 3 ** m
    for r in range(4):
        for L in itertools.combinations(range(3), r):
            mask = np.ones(len(sigma), dtype=bool)
            for j in L:
                mask &= ok[j]
            out[L] = Fraction(int(mask.sum()), total)
    return out


def welsh_verdict(s: int) -> V.Verdict:
    """Does Pr(A_2) Pr(A_012) > Pr(A_02) Pr(A_12) hold exactly at this s?

    The conjectured inequality is A_0 ↓ A_1 given A_2, i.e. the reverse
    non-strict inequality, so a strict ">" is reported as a violation.
    """
    P = welsh_probabilities(WelshInstance(s))
    lhs = P[(2,)] * P[(0, 1, 2)]
    rhs = P[(0, 2)] * P[(1, 2)]
    values = {"s": s, "P_2": P[(2,)], "P_012": P[(0, 1, 2)], "P_02": P[(0, 2)],
              "P_12": P[(1, 2)]}
    if lhs > rhs:
        return V.violated("welsh", values, 1, satisfied=True)
    return V.holds("welsh", 1, satisfied=False, note="inequality not yet satisfied", **values)


def welsh_scan(s_min: int = 1, s_max: int = 200, stop: bool = True) -> V.Report:
    """Scan s and record the first s where the strict inequality holds."""
    rep = V.Report("welsh_scan", {"s_min": s_min, "s_max": s_max})
    first = None
    for s in range(s_min, s_max + 1):
        v = rep.add(welsh_verdict(s), s=s)
        if v.violated and first is None:
            first = s
            if stop:
                break
    rep.summary["first_s"] = first
    return rep


def welsh_asymptotics(inst: WelshInstance, factor=2) -> dict:
    """Ratio of each exact Pr(A_L), |L| = 1, 2, 3, to its large-t approximation."""
    if isinstance(inst, int):
        inst = WelshInstance(inst)
    P = welsh_probabilities(inst)
    a = inst.alpha
    targets = {1: (WELSH_C + 3) * a, 2: 6 * a ** 2, 3: 6 * a ** 3}
    factor = to_fraction(factor)
    out = {}
    for r, target in targets.items():
        L = tuple(range(r))
        ratio = P[L] / target
        out[r] = {"exact": P[L], "target": target, "ratio": ratio,
                  "within": 1 / factor <= ratio <= factor}
    return out


# -- decreasing families and the extra urn ------------------------------------

class IdealSpec:
    """Decreasing family of subsets of range(m), stored as bitmask membership."""

    def __init__(self, m: int, members):
        self.m = int(m)
        mem = np.zeros(1 << self.m, dtype=bool)
        for S in members:
            mask = 0
            for i in S:
                if not 0 <= i < self.m:
                    raise DimensionError(f"element {i} outside range({m})")
                mask |= 1 << i
            mem[mask] = True
        for mask in np.nonzero(mem)[0]:
            mask = int(mask)
            for i in range(self.m):
                if mask >> i & 1 and not mem[mask & ~(1 << i)]:
                    raise ValueError("family is not decreasing")
        if not mem[0]:
            raise ValueError("a nonempty decreasing family contains the empty set")
        self.mask = mem

    @classmethod
    def from_graph(cls, m: int, edges) -> "IdealSpec":
        """Independent sets of a graph on range(m)."""
        mem = []
        edges = [tuple(e) for e in edges]
        for mask in range(1 << m):
            if all(not (mask >> u & 1 and mask >> v & 1) for u, v in edges):
                mem.append([i for i in range(m) if mask >> i & 1])
        out = cls(m, mem)
        out.edges = edges
        return out

    @classmethod
    def from_maximal(cls, m: int, maximal) -> "IdealSpec":
        mem = set()
        for S in maximal:
            S = sorted(set(S))
            for r in range(len(S) + 1):
                mem.update(itertools.combinations(S, r))
        return cls(m, mem or [()])

    def __contains__(self, S) -> bool:
        mask = 0
        for i in S:
            mask |= 1 << i
        return bool(self.mask[mask])

    def to_dict(self) -> dict:
        if hasattr(self, "edges"):
            return {"m": self.m, "graph": [list(e) for e in self.edges]}
        maximal = []
        for mask in np.nonzero(self.mask)[0]:
            mask = int(mask)
            if all(mask >> i & 1 or not self.mask[mask | 1 << i] for i in range(self.m)):
                maximal.append([i for i in range(self.m) if mask >> i & 1])
        return {"m": self.m, "maximal": maximal}


def _disjoint_tuples(ideal: IdealSpec, r: int) -> list:
    """g[S] = number of r-tuples of disjoint members of the family with union S."""
    size = 1 << ideal.m
    g = [0] * size
    g[0] = 1
    for _ in range(r):
        new = [0] * size
        for S in range(size):
            T = S
            while True:
                if ideal.mask[T] and g[S ^ T]:
                    new[S] += g[S ^ T]
                if T == 0:
                    break
                T = (T - 1) & S
        g = new
    return g


def ideal_probability(ideal: IdealSpec, r: int, p) -> Fraction:
    """Pr(A_L) for |L| = r when each ball picks each of the n urns w.p. p (else urn Λ)."""
    p = to_fraction(p)
    g = _disjoint_tuples(ideal, r)
    rest = 1 - r * p
    total = Fraction(0)
    for S, cnt in enumerate(g):
        if cnt:
            k = bin(S).count("1")
            total += cnt * p ** k * rest ** (ideal.m - k)
    return total


def ideal_probability_bruteforce(ideal: IdealSpec, L, n: int, p) -> Fraction:
    """Enumerate all (n+1)^m assignments; urn n plays the role of Λ."""
    p = to_fraction(p)
    probs = [p] * n + [1 - n * p]
    total = Fraction(0)
    for sigma in itertools.product(range(n + 1), repeat=ideal.m):
        if all([i for i, j in enumerate(sigma) if j == u] in ideal for u in L):
            w = Fraction(1)
            for j in sigma:
                w *= probs[j]
            total += w
    return total


def _ideal(graph_or_ideal, m=None) -> IdealSpec:
    if isinstance(graph_or_ideal, IdealSpec):
        return graph_or_ideal
    if hasattr(graph_or_ideal, "nodes"):
        nodes = sorted(graph_or_ideal.nodes())
        idx = {x: i for i, x in enumerate(nodes)}
        return IdealSpec.from_graph(len(nodes), [(idx[u], idx[v]) for u, v in graph_or_ideal.edges()])
    m, edges = graph_or_ideal
    return IdealSpec.from_graph(m, edges)


def farr_check(graph, p, I, J, K, n: int) -> V.Verdict:
    """A_I ↓ A_J given A_K: Pr(A_{I∪J∪K}) Pr(A_K) <= Pr(A_{I∪K}) Pr(A_{J∪K}).

    ``graph`` is a networkx graph, an ``(m, edges)`` pair, or an ``IdealSpec``
    (in which case the family need not come from a graph).
    """
    ideal = _ideal(graph)
    p = to_fraction(p)
    I, J, K = set(I), set(J), set(K)
    if I & J or I & K or J & K:
        raise ValueError("I, J, K must be disjoint")
    if any(not 0 <= j < n for j in I | J | K):
        raise DimensionError(f"urns must lie in 0..{n - 1}")
    if p < 0 or n * p > 1:
        raise ValueError("need 0 <= p and n p <= 1")
    probs = {}
    for r in {len(K), len(I | K), len(J | K), len(I | J | K)}:
        probs[r] = ideal_probability(ideal, r, p)
    pk = probs[len(K)]
    if pk == 0:
        raise ZeroProbabilityError("Pr(A_K) = 0")
    joint = probs[len(I | J | K)] / pk
    pi, pj = probs[len(I | K)] / pk, probs[len(J | K)] / pk
    values = {"P_IJ_given_K": joint, "P_I_given_K": pi, "P_J_given_K": pj}
    if joint > pi * pj:
        return V.violated("farr", dict(values, family=ideal.to_dict(), p=p, n=n,
                                       I=sorted(I), J=sorted(J), K=sorted(K)), 1)
    return V.holds("farr", 1, **values)


def _random_ideal(rng: random.Random, m: int) -> IdealSpec:
    sets = [[i for i in range(m) if rng.random() < 0.5] for _ in range(rng.randint(1, 4))]
    return IdealSpec.from_maximal(m, sets)


def farr_search(seed, budget: int = 100, m_max: int = 7, n_max: int = 4,
                family: str = "graph") -> V.Report:
    """Random graphs (or arbitrary decreasing families) and urn splits.

    Any violation of the graph version would refute an open conjecture, so
    it is reported with the full instance, never expected.
    """
    if family not in ("graph", "ideal"):
        raise ValueError("family must be 'graph' or 'ideal'")
    rng = random.Random(seed)
    rep = V.Report("farr_search", {"seed": seed, "budget": budget, "m_max": m_max,
                                   "n_max": n_max, "family": family})
    for _ in range(budget):
        m = rng.randint(2, m_max)
        n = rng.randint(2, n_max)
        if family == "graph":
            q = rng.choice([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
            edges = [(u, v) for u, v in itertools.combinations(range(m), 2) if rng.random() < q]
            ideal = IdealSpec.from_graph(m, edges)
        else:
            ideal = _random_ideal(rng, m)
        d = rng.randint(1, 4)
        p = Fraction(rng.randint(1, d), n * d)
        urns = list(range(n))
        rng.shuffle(urns)
        a = rng.randint(1, n - 1)
        b = rng.randint(1, n - a)
        c = rng.randint(0, n - a - b)
        I, J, K = urns[:a], urns[a:a + b], urns[a + b:a + b + c]
        try:
            v = farr_check(ideal, p, I, J, K, n)
        except ZeroProbabilityError as exc:
            v = V.inconclusive("farr", str(exc))
        rep.add(v, family=ideal.to_dict(), p=p, n=n, I=sorted(I), J=sorted(J), K=sorted(K))
    rep.summary["violations"] = rep.counts()[V.VIOLATED]
    return rep


# -- generalized urn measures: CNA, R+, QQ, normalized matching ---------------

def qcna_search(seed, budget: int = 50, m_max: int = 4, n_max: int = 3,
                iid_fraction: float = 0.25, r_plus_samples: int = 20) -> V.Report:
    """Sample small models and interval specs; run CNA and the R+ falsifier.

    A CNA violation on a generalized model answers the open question in the
    negative; together with no R+ violation found it is also a candidate
    against "R+ implies CNA". R+ failures alone are expected for threshold
    measures and are recorded as information only. A CNA violation on an
    i.i.d.-row model would contradict a theorem and signals a bug.
    """
    rng = random.Random(seed)
    rep = V.Report("qcna_search", {"seed": seed, "budget": budget, "m_max": m_max,
                                   "n_max": n_max, "iid_fraction": iid_fraction})
    r_plus_violations = 0
    for trial in range(budget):
        m = rng.randint(1, m_max)
        n = rng.randint(2, n_max)
        iid = rng.random() < iid_fraction
        model = random_model(rng, m, n, iid=iid)
        if rng.random() < 0.5:
            spec = IntervalSpec.from_thresholds(m, [rng.randint(0, m + 1) for _ in range(n)])
        else:
            spec = random_interval_spec(rng, m, n)
        mu = interval_urn_measure(model, spec)
        v = check_cna(mu)
        extra = {}
        if mu.space.is_binary:
            r = falsify_fields(mu, "r_plus", samples=r_plus_samples, seed=f"{seed}:{trial}")
            extra["r_plus"] = r.status
            if r.violated:
                r_plus_violations += 1
            if v.violated and not r.violated:
                extra["r_plus_implies_cna_candidate"] = True
        if v.violated:
            v.witness = dict(v.witness, model=model.to_dict(), spec=spec.to_dict())
            if model.iid_flag:
                extra["contradicts_iid_theorem"] = True
        rep.add(v, model=model, spec=spec, iid=model.iid_flag, **extra)
    rep.summary["r_plus_violations"] = r_plus_violations
    return rep


def _xi_law(model: UrnModel, parts, bounds, cap: int) -> FiniteMeasure:
    m, n = model.m, model.n
    if n ** m > cap:
        raise CapExceededError(f"{n ** m} assignments exceed cap {cap}")
    parts = [set((int(i), int(j)) for i, j in T) for T in parts]
    if len(parts) != len(bounds):
        raise DimensionError("one bound pair per part")
    seen = set()
    for T in parts:
        if seen & T:
            raise ValueError("parts must be disjoint")
        if any(not (0 <= i < m and 0 <= j < n) for i, j in T):
            raise DimensionError("cell outside [m] x [n]")
        seen |= T
    rows = model.int_rows()
    weights = {}
    for sigma in itertools.product(range(n), repeat=m):
        w = 1
        for i, j in enumerate(sigma):
            w *= rows[i][j]
        if not w:
            continue
        cells = {(i, j) for i, j in enumerate(sigma)}
        if all(lo <= len(T & cells) <= hi for T, (lo, hi) in zip(parts, bounds)):
            xi = tuple(1 if sigma[i] == j else 0 for i in range(m) for j in range(n))
            weights[xi] = weights.get(xi, 0) + w
    if not weights:
        raise ZeroProbabilityError("box constraints have probability zero")
    return FiniteMeasure.from_weights(ChainProductSpace.binary(m * n), weights)


def qq_check(model: UrnModel, parts=(), bounds=(), cap: int = 10 ** 5,
             max_upsets: int = 10_000) -> V.Verdict:
    """NA of the xi-array (coordinate i*n + j is 1{sigma(i) = j}) given xi(T_r) in [a_r, b_r]."""
    mu = _xi_law(model, parts, bounds, cap)
    v = check_na(mu, max_upsets)
    v.name = "qq"
    if v.violated:
        v.witness = dict(v.witness, model=model.to_dict(),
                         parts=[sorted(T) for T in parts], bounds=[list(b) for b in bounds])
    return v


def preimage_law(model: UrnModel, Q: ConditioningEvent, K, cap: int = ENUMERATION_CAP) -> FiniteMeasure:
    """Law of sigma^{-1}(K) given Q, as a measure on {0,1}^m."""
    m, n = model.m, model.n
    if 2 ** m > cap:
        raise CapExceededError(f"2^m = {2 ** m} exceeds cap {cap}")
    K = set(K)
    if any(not 0 <= j < n for j in K):
        raise DimensionError("K names a nonexistent urn")
    rows = model.int_rows()
    urns = sorted(Q.urns)
    caps = [min(Q.windows[j][1] + 1, m) for j in urns]
    blocks = [(j,) for j in urns]
    weights = {}
    for eta in itertools.product((0, 1), repeat=m):
        masked = []
        for i, x in enumerate(eta):
            row = [w if ((j in K) == bool(x)) else 0 for j, w in enumerate(rows[i])]
            masked.append(row)
        if any(not any(r) for r in masked):
            continue
        total = 0
        for st, w in block_weights(masked, blocks, caps).items():
            if all(Q.windows[j][0] <= c <= Q.windows[j][1] for j, c in zip(urns, st)):
                total += w
        if total:
            weights[eta] = total
    if not weights:
        raise ZeroProbabilityError(f"conditioning event {Q.windows} has probability zero")
    return FiniteMeasure.from_weights(ChainProductSpace.binary(m), weights)


def check_nmp_question(model: UrnModel, Q: ConditioningEvent, K,
                       cap: int = ENUMERATION_CAP) -> V.Verdict:
    """Normalized matching property of the law of sigma^{-1}(K) given Q."""
    mu = preimage_law(model, Q, K, cap)
    v = check_normalized_matching(mu)
    v.name = "nmp"
    if v.violated:
        v.witness = dict(v.witness, model=model.to_dict(), Q=Q.to_dict(), K=sorted(K))
    return v


def nmp_search(seed, budget: int = 50, m_max: int = 4, n_max: int = 4) -> V.Report:
    rng = random.Random(seed)
    rep = V.Report("nmp_search", {"seed": seed, "budget": budget, "m_max": m_max, "n_max": n_max})
    for _ in range(budget):
        m = rng.randint(1, m_max)
        n = rng.randint(2, n_max)
        model = random_model(rng, m, n)
        urns = list(range(n))
        rng.shuffle(urns)
        k = rng.randint(1, n - 1)
        K, rest = urns[:k], urns[k:]
        windows = {}
        for j in rest:
            if rng.random() < 0.5:
                lo = rng.randint(0, m)
                windows[j] = (lo, rng.randint(lo, m))
        Q = ConditioningEvent(windows)
        try:
            v = check_nmp_question(model, Q, K)
        except ZeroProbabilityError as exc:
            v = V.inconclusive("nmp", str(exc))
        rep.add(v, model=model, Q=Q.to_dict(), K=sorted(K))
    return rep


# -- Rayleigh failures of ordinary urn measures -------------------------------

def _positive_field(mu: FiniteMeasure, W):
    """Replace zero entries of a violating field by small positive values when possible."""
    if all(w > 0 for w in W):
        return W
    for k in range(1, 7):
        W2 = [w if w > 0 else Fraction(1, 10 ** k) for w in W]
        if check_nc(external_field(mu, W2)).violated:
            return W2
    return W


def rayleigh_search(seed, budget: int = 200, m_max: int = 6, n_max: int = 5,
                    samples: int = 60) -> V.Report:
    """Look for an ordinary urn measure (i.i.d. balls, occupancy indicators) that is not Rayleigh.

    Stops at the first witness, which is rechecked exactly with a strictly
    positive field when one exists nearby.
    """
    rng = random.Random(seed)
    rep = V.Report("rayleigh_search", {"seed": seed, "budget": budget, "m_max": m_max,
                                       "n_max": n_max, "samples": samples})
    for trial in range(budget):
        m = rng.randint(2, m_max)
        n = rng.randint(3, n_max)
        w = [Fraction(rng.randint(1, 8), rng.randint(1, 8)) for _ in range(n)]
        model = UrnModel.iid(m, w)
        mu = threshold_urn_measure(model, [1] * n)
        v = falsify_fields(mu, "rayleigh", samples=samples, seed=trial)
        if v.violated:
            W = _positive_field(mu, v.witness["field"])
            sub = check_nc(external_field(mu, W))
            v = V.violated("rayleigh", {"model": model.to_dict(), "field": W, "nc": sub.witness},
                           v.checked, trials=v.info.get("trials"))
            rep.add(v, trial=trial)
            break
        rep.add(v, trial=trial, model=model)
    return rep
