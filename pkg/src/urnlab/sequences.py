"""Log-concavity and lattice-condition checkers.

Ratio inequalities are always evaluated by cross-multiplication. A ratio
``x/0`` with ``x > 0`` counts as infinite; a comparison involving ``0/0`` is
skipped and counted in ``Verdict.skipped``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from . import verdict as V
from ._rational import to_fraction
from .measures import ChainProductSpace, FiniteMeasure, condition, leq
from .urns import JointXYLaw


def _seq(values):
    return [to_fraction(x) for x in values]


def internal_zeros(seq) -> list:
    """Indices of zeros lying strictly between two nonzero entries."""
    nz = [i for i, x in enumerate(seq) if x]
    if not nz:
        return []
    return [i for i in range(nz[0], nz[-1] + 1) if not seq[i]]


def check_slc(seq: Sequence) -> V.Verdict:
    """SLC: i * a_i^2 >= (i+1) * a_{i-1} * a_{i+1} for every interior i >= 1.

    SLC does not rule out internal zeros, so they are reported in
    ``info["internal_zeros"]`` without affecting the verdict.
    """
    a = _seq(seq)
    if any(x < 0 for x in a):
        raise ValueError("SLC is defined for nonnegative sequences")
    zeros = internal_zeros(a)
    checked = 0
    for i in range(1, len(a) - 1):
        checked += 1
        lhs, rhs = i * a[i] ** 2, (i + 1) * a[i - 1] * a[i + 1]
        if lhs < rhs:
            return V.violated("slc", {"i": i, "lhs": lhs, "rhs": rhs}, checked,
                              internal_zeros=zeros)
    info = {"internal_zeros": zeros} if zeros else {}
    return V.holds("slc", checked, **info)


def check_ulc(seq: Sequence, n: int | None = None) -> V.Verdict:
    """ULC relative to ambient length n: no internal zeros and r_i / C(n,i) log-concave."""
    r = _seq(seq)
    if n is None:
        n = len(r) - 1
    if len(r) > n + 1:
        raise ValueError(f"sequence of length {len(r)} does not fit ambient n={n}")
    if any(x < 0 for x in r):
        raise ValueError("ULC is defined for nonnegative sequences")
    zeros = internal_zeros(r)
    if zeros:
        return V.violated("ulc", {"internal_zero": zeros[0]}, 0)
    checked = 0
    for i in range(1, len(r) - 1):
        checked += 1
        lhs = r[i] ** 2 * comb(n, i - 1) * comb(n, i + 1)
        rhs = r[i - 1] * r[i + 1] * comb(n, i) ** 2
        if lhs < rhs:
            return V.violated("ulc", {"i": i, "lhs": lhs, "rhs": rhs}, checked)
    return V.holds("ulc", checked)


def check_ulc_measure(mu: FiniteMeasure) -> V.Verdict:
    """ULC of a measure on {0,1}^n via its rank sequence."""
    return check_ulc(mu.rank_sequence(), mu.ndim)


# -- (X, Y) tables ---------------------------------------------------------------

def check_mukl_table(table: Mapping) -> V.Verdict:
    """mu_{k+1}(l+1)/mu_{k+1}(l) <= mu_k(l+1)/mu_k(l) over a joint (X, Y) table.

    mu_k(l) = P(k, l) / P(X = k), so the row normalizers cancel and the test
    is ``P(k+1,l+1) P(k,l) <= P(k,l+1) P(k+1,l)``, skipped when either ratio
    is 0/0.
    """
    if isinstance(table, JointXYLaw):
        table = table.table
    P = {kl: to_fraction(p) for kl, p in table.items() if p}
    if not P:
        return V.holds("mukl_prime", 0)
    K = max(k for k, _ in P)
    L = max(l for _, l in P)
    get = lambda k, l: P.get((k, l), 0)
    checked = skipped = 0
    for k in range(K):
        for l in range(L):
            a, b = get(k + 1, l + 1), get(k + 1, l)
            c, d = get(k, l + 1), get(k, l)
            if (a == 0 and b == 0) or (c == 0 and d == 0):
                skipped += 1
                continue
            checked += 1
            if a * d > c * b:
                return V.violated("mukl_prime", {"k": k, "l": l, "lhs": a * d, "rhs": c * b},
                                  checked, skipped)
    return V.holds("mukl_prime", checked, skipped)


def check_threshold_nc(table: Mapping, name: str = "x_down_y") -> V.Verdict:
    """X ↓ Y: Pr(X>=s, Y>=t) <= Pr(X>=s) Pr(Y>=t) for every threshold pair."""
    if isinstance(table, JointXYLaw):
        table = table.table
    P = {kl: to_fraction(p) for kl, p in table.items() if p}
    total = sum(P.values())
    K = max(k for k, _ in P)
    L = max(l for _, l in P)
    checked = 0
    for s in range(1, K + 1):
        ps = sum(p for (k, _), p in P.items() if k >= s)
        for t in range(1, L + 1):
            pt = sum(p for (_, l), p in P.items() if l >= t)
            joint = sum(p for (k, l), p in P.items() if k >= s and l >= t)
            checked += 1
            if joint * total > ps * pt:
                return V.violated(name, {"s": s, "t": t, "joint": joint / total,
                                         "product": ps * pt / total ** 2}, checked)
    return V.holds(name, checked)


def binomial_split(nu: Sequence, alpha) -> JointXYLaw:
    """Law of (X, Y) with Z ~ nu, X ~ Bin(Z, alpha), Y = Z - X."""
    nu = _seq(nu)
    alpha = to_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    total = sum(nu)
    if total == 0:
        raise ValueError("nu has no mass")
    table = {}
    for z, w in enumerate(nu):
        if not w:
            continue
        for k in range(z + 1):
            p = w / total * comb(z, k) * alpha ** k * (1 - alpha) ** (z - k)
            if p:
                table[k, z - k] = table.get((k, z - k), 0) + p
    return JointXYLaw(table)


def check_bna_grid(nu: Sequence, alphas: Sequence) -> V.Verdict:
    """BNA on a grid of alphas: X ↓ Y by thresholds, and the mu_k ratio table."""
    verdicts = []
    for alpha in alphas:
        law = binomial_split(nu, alpha)
        for v in (check_threshold_nc(law), check_mukl_table(law)):
            if v.violated:
                v.witness = dict(v.witness, alpha=to_fraction(alpha))
            verdicts.append(v)
    return V.combine("bna_grid", verdicts, alphas=[to_fraction(a) for a in alphas])


# -- antipodal pairs --------------------------------------------------------------

def alpha_sequence(mu: FiniteMeasure) -> list:
    """alpha_i = C(m,i)^{-1} * sum over |A| = i of mu(A) mu(complement of A)."""
    if not mu.space.is_binary:
        raise ValueError("alpha sequence is defined on {0,1}^m")
    m = mu.ndim
    out = [Fraction(0)] * (m + 1)
    for eta, p in mu.mass.items():
        comp = tuple(1 - x for x in eta)
        q = mu.mass.get(comp)
        if q:
            out[sum(eta)] += p * q
    return [a / comb(m, i) for i, a in enumerate(out)]


def check_app(mu: FiniteMeasure) -> V.Verdict:
    """APP for m = 2k: alpha_k >= alpha_{k-1}."""
    m = mu.ndim
    if m % 2:
        raise ValueError(f"APP needs an even number of coordinates, got {m}")
    k = m // 2
    al = alpha_sequence(mu)
    if al[k] < al[k - 1]:
        return V.violated("app", {"k": k, "alpha_k": al[k], "alpha_k_minus_1": al[k - 1]}, 1)
    return V.holds("app", 1)


def check_capp(mu: FiniteMeasure) -> V.Verdict:
    """APP for every conditional obtained by fixing m - 2k coordinates (k >= 1)."""
    m = mu.ndim
    checked = 0
    for k in range(1, m // 2 + 1):
        for fixed in itertools.combinations(range(m), m - 2 * k):
            values = {tuple(eta[i] for i in fixed) for eta in mu.mass}
            for vals in sorted(values):
                fixing = dict(zip(fixed, vals))
                nu = condition(mu, fixing) if fixing else mu
                v = check_app(nu)
                checked += 1
                if v.violated:
                    return V.violated("capp", dict(v.witness, fixing=fixing), checked)
    return V.holds("capp", checked)


# -- lattice conditions and convexity on N^d ------------------------------------

def _as_function(f) -> dict:
    if isinstance(f, FiniteMeasure):
        return dict(f.mass)
    return {tuple(k): to_fraction(v) for k, v in f.items() if v}


def _join(a, c):
    return tuple(max(x, y) for x, y in zip(a, c))


def _meet(a, c):
    return tuple(min(x, y) for x, y in zip(a, c))


def check_nlc(f, kind: str = "negative") -> V.Verdict:
    """Lattice condition for a finitely supported nonnegative function on N^d.

    ``kind="negative"``: f(a) f(c) >= f(a∨c) f(a∧c) for all a, c.
    ``kind="positive"``: the reverse (FKG) inequality.

    For the negative form only pairs whose join and meet are both in the
    support can fail; they are enumerated from comparable support pairs
    (u >= v) by splitting the differing coordinates between a and c.
    """
    f = _as_function(f)
    if kind not in ("negative", "positive"):
        raise ValueError("kind must be 'negative' or 'positive'")
    supp = sorted(f)
    get = lambda x: f.get(x, 0)
    checked = 0
    if kind == "positive":
        for a, c in itertools.combinations(supp, 2):
            checked += 1
            if get(_join(a, c)) * get(_meet(a, c)) < f[a] * f[c]:
                return V.violated("nlc", {"a": a, "c": c}, checked, kind=kind)
        return V.holds("nlc", checked, kind=kind)
    for u in supp:
        for v in supp:
            if u == v or not leq(v, u):
                continue
            diff = [i for i in range(len(u)) if u[i] != v[i]]
            if len(diff) < 2:
                continue
            first, rest = diff[0], diff[1:]
            for mask in range(1 << len(rest)):
                # fix the first differing coordinate of a at u to count each pair once
                a, c = list(v), list(u)
                a[first], c[first] = u[first], v[first]
                for b, i in enumerate(rest):
                    if mask >> b & 1:
                        a[i], c[i] = u[i], v[i]
                if mask == (1 << len(rest)) - 1:
                    continue  # a == u, c == v: trivial
                a, c = tuple(a), tuple(c)
                checked += 1
                lhs, rhs = get(a) * get(c), f[u] * f[v]
                if lhs < rhs:
                    return V.violated("nlc", {"a": a, "c": c, "join": u, "meet": v,
                                              "lhs": lhs, "rhs": rhs}, checked, kind=kind)
    return V.holds("nlc", checked, kind=kind)


def check_support_convex(f) -> V.Verdict:
    """Support C convex: a <= b <= c with a, c in C forces b in C.

    Equivalent to: for a <= c in C and a_i < c_i, c - e_i is in C.
    """
    supp = set(_as_function(f))
    checked = 0
    for a in sorted(supp):
        for c in sorted(supp):
            if a == c or not leq(a, c):
                continue
            for i in range(len(c)):
                if a[i] < c[i]:
                    b = c[:i] + (c[i] - 1,) + c[i + 1:]
                    checked += 1
                    if b not in supp:
                        return V.violated("support_convex", {"a": a, "b": b, "c": c}, checked)
    return V.holds("support_convex", checked)


def sequence_function(seq) -> dict:
    """View a sequence as a function on N^1."""
    return {(i,): to_fraction(x) for i, x in enumerate(seq) if x}


def subset_function(m: int, f: Mapping) -> dict:
    """View a set function (keys are subsets of range(m)) as a function on {0,1}^m."""
    out = {}
    for S, v in f.items():
        eta = tuple(1 if i in S else 0 for i in range(m))
        if v:
            out[eta] = to_fraction(v)
    return out


def binary_space(m: int) -> ChainProductSpace:
    return ChainProductSpace.binary(m)
