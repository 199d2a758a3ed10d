"""Theorem-level suites tying urn laws to the correlation and log-concavity inequalities.

Every suite works on unnormalized integer weights: each inequality below is
homogeneous in the normalizing constants, so they cancel. Windows
``[a_j, b_j]`` range over ``0 <= a_j <= b_j <= m`` for urns ``0..n-2``; the
last urn is the target. Laws for all windows at once come from the joint
occupancy table by a separable window-sum transform.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from math import comb

import numpy as np

from . import verdict as V
from .correlation import check_cna
from .errors import CapExceededError, DimensionError
from .generators import random_increasing_family, random_interval_spec
from .sequences import (check_mukl_table, check_nlc, check_slc, check_support_convex,
                        check_ulc, subset_function)
from .urns import (ENUMERATION_CAP, ConditioningEvent, IncreasingFamily, IntervalSpec, UrnModel,
                   block_weights, conditional_xy_law, interval_urn_measure, window_law)

THEOREMS = ("mainthm-a", "mainthm-b", "mukl-prime", "mukl-double-prime", "mukl-triple-prime",
            "propcvx-cornlc", "nlcf", "dr26", "interval-cna")


# -- shared tables ------------------------------------------------------------

def occupancy_tensor(model: UrnModel) -> np.ndarray:
    """Unnormalized weights W[B_0, ..., B_{n-1}] as an object array of ints."""
    m, n = model.m, model.n
    T = np.zeros((m + 1,) * n, dtype=object)
    for st, w in block_weights(model.int_rows(), [(j,) for j in range(n)], [m] * n).items():
        T[st] += w
    return T


def windows(m: int) -> list:
    return [(a, b) for a in range(m + 1) for b in range(a, m + 1)]


def window_matrix(wins, m: int) -> np.ndarray:
    M = np.zeros((len(wins), m + 1), dtype=object)
    for w, (a, b) in enumerate(wins):
        M[w, a:b + 1] = 1
    return M


def window_transform(T: np.ndarray, axes, M: np.ndarray) -> np.ndarray:
    """Replace each listed count axis by a window axis (sums over the window)."""
    for ax in axes:
        T = np.moveaxis(np.tensordot(M, T, axes=([1], [ax])), 0, ax)
    return T


def _neighbours(wins, m):
    idx = {w: i for i, w in enumerate(wins)}
    pairs = []
    for i, (a, b) in enumerate(wins):
        if a + 1 <= b:
            pairs.append((i, idx[a + 1, b]))
        if b + 1 <= m:
            pairs.append((i, idx[a, b + 1]))
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


def _decode(model, wins, head):
    a = [wins[w][0] for w in head]
    b = [wins[w][1] for w in head]
    return a, b


def window_table(model: UrnModel):
    """S[w_0, ..., w_{n-2}, k]: weight of {B_last = k} on each window combination."""
    m = model.m
    wins = windows(m)
    T = occupancy_tensor(model)
    return window_transform(T, range(model.n - 1), window_matrix(wins, m)), wins


# -- Theorem: monotone ratios and SLC of p(k, a, b) -----------------------------

def verify_mainthm_a(model: UrnModel) -> V.Verdict:
    """p(k+1,a',b') p(k,a,b) <= p(k,a',b') p(k+1,a,b) for every single-step increase (a,b) -> (a',b').

    Comparisons where either ratio is 0/0 (including zero-probability
    windows) are skipped and counted.
    """
    m, n = model.m, model.n
    S, wins = window_table(model)
    pairs = _neighbours(wins, m)
    checked = skipped = 0
    for j in range(n - 1):
        if not len(pairs):
            break
        lo = np.take(S, pairs[:, 0], axis=j)
        hi = np.take(S, pairs[:, 1], axis=j)
        for k in range(m):
            x, y = hi[..., k + 1], hi[..., k]
            u, v = lo[..., k + 1], lo[..., k]
            skip = ((x == 0) & (y == 0)) | ((u == 0) & (v == 0))
            bad = (x * v > y * u) & ~skip
            skipped += int(skip.sum())
            checked += int((~skip).sum())
            if bad.any():
                pos = tuple(int(i) for i in np.argwhere(bad)[0])
                base = list(pos)
                p = pos[j]
                lo_w = list(base); lo_w[j] = int(pairs[p, 0])
                hi_w = list(base); hi_w[j] = int(pairs[p, 1])
                a, b = _decode(model, wins, lo_w)
                a2, b2 = _decode(model, wins, hi_w)
                return V.violated("mainthm_a", {"k": k, "a": a, "b": b, "a_next": a2, "b_next": b2,
                                                "model": model.to_dict()}, checked, skipped)
    return V.holds("mainthm_a", checked, skipped)


def _slc_bad(S, m):
    """Boolean array of SLC failures per window, and the failing index."""
    bad = np.zeros(S.shape[:-1], dtype=bool)
    where = np.full(S.shape[:-1], -1)
    for i in range(1, m):
        fail = i * S[..., i] ** 2 < (i + 1) * S[..., i - 1] * S[..., i + 1]
        fail = np.asarray(fail, dtype=bool)
        where = np.where(fail & ~bad, i, where)
        bad |= fail
    return bad, where


def verify_mainthm_b(model: UrnModel, a=None, b=None) -> V.Verdict:
    """{p(k,a,b)}_k is SLC, for one window or (default) every window."""
    m = model.m
    if a is not None:
        v = check_slc(window_law(model, a, b))
        v.name = "mainthm_b"
        return v
    S, wins = window_table(model)
    total = S.sum(axis=-1)
    live = np.asarray(total != 0, dtype=bool)
    bad, where = _slc_bad(S, m)
    bad &= live
    checked = int(live.sum()) * max(m - 1, 0)
    skipped = int((~live).sum())
    if bad.any():
        pos = [int(i) for i in np.argwhere(bad)[0]]
        a, b = _decode(model, wins, pos)
        return V.violated("mainthm_b", {"a": a, "b": b, "i": int(where[tuple(pos)]),
                                        "model": model.to_dict()}, checked, skipped)
    return V.holds("mainthm_b", checked, skipped)


# -- the (X, Y) law given Q ----------------------------------------------------

MUKL_VARIANTS = ("prime", "double_prime", "triple_prime")


def verify_mukl(model: UrnModel, Q: ConditioningEvent, I, J, variant: str = "prime") -> V.Verdict:
    """One instance: the mu_k ratio table, SLC of Z, or ULC of Z relative to m."""
    if variant not in MUKL_VARIANTS:
        raise ValueError(f"variant must be one of {MUKL_VARIANTS}")
    law = conditional_xy_law(model, Q, I, J)
    if variant == "prime":
        v = check_mukl_table(law)
    elif variant == "double_prime":
        v = check_slc(law.z_law(model.m + 1))
    else:
        v = check_ulc(law.z_law(model.m + 1), model.m)
    v.name = f"mukl_{variant}"
    return v


def partitions_ijk(n: int, ordered: bool = False):
    """(I, J, K) with I, J nonempty; unordered in (I, J) unless ``ordered``."""
    for labels in itertools.product(range(3), repeat=n):
        I = tuple(j for j in range(n) if labels[j] == 0)
        J = tuple(j for j in range(n) if labels[j] == 1)
        K = tuple(j for j in range(n) if labels[j] == 2)
        if I and J and (ordered or I < J):
            yield I, J, K


def mukl_tables(model: UrnModel, T: np.ndarray | None = None):
    """Yield (I, J, K, windows, P) with P[x, y, w_K...] the weight of (X, Y) = (x, y) on each K-window."""
    m, n = model.m, model.n
    T = occupancy_tensor(model) if T is None else T
    wins = windows(m)
    M = window_matrix(wins, m)
    for I, J, K in partitions_ijk(n):
        P = np.zeros((m + 1, m + 1) + (m + 1,) * len(K), dtype=object)
        for st in zip(*np.nonzero(T)):
            x = sum(st[j] for j in I)
            y = sum(st[j] for j in J)
            P[(x, y) + tuple(st[j] for j in K)] += T[st]
        yield I, J, K, wins, window_transform(P, range(2, 2 + len(K)), M)


def mukl_flags(model: UrnModel, P: np.ndarray):
    """Per-window failure flags for the three variants, plus skip/check counts."""
    m = model.m
    shape = P.shape[2:]
    live = np.asarray(P.sum(axis=(0, 1)) != 0, dtype=bool)
    prime_bad = np.zeros(shape, dtype=bool)
    skipped = checked = 0
    for k in range(m):
        for l in range(m):
            a, b = P[k + 1, l + 1], P[k + 1, l]
            c, d = P[k, l + 1], P[k, l]
            skip = np.asarray(((a == 0) & (b == 0)) | ((c == 0) & (d == 0)), dtype=bool) | ~live
            prime_bad |= np.asarray(a * d > c * b, dtype=bool) & ~skip
            skipped += int(skip.sum())
            checked += int((~skip).sum())
    Z = np.zeros((m + 1,) + shape, dtype=object)
    for k in range(m + 1):
        for l in range(m + 1 - k):
            Z[k + l] = Z[k + l] + P[k, l]
    Zl = np.moveaxis(Z, 0, -1)
    slc_bad, _ = _slc_bad(Zl, m)
    slc_bad &= live
    ulc_bad = np.zeros(shape, dtype=bool)
    nz = np.asarray(Zl != 0, dtype=bool)
    seen = np.zeros(shape, dtype=bool)
    gap = np.zeros(shape, dtype=bool)
    for i in range(m + 1):
        # a zero after a nonzero that is followed by another nonzero
        later = nz[..., i + 1:].any(axis=-1) if i < m else np.zeros(shape, dtype=bool)
        gap |= seen & ~nz[..., i] & later
        seen |= nz[..., i]
    ulc_bad |= gap
    for i in range(1, m):
        lhs = Zl[..., i] ** 2 * comb(m, i - 1) * comb(m, i + 1)
        rhs = Zl[..., i - 1] * Zl[..., i + 1] * comb(m, i) ** 2
        ulc_bad |= np.asarray(lhs < rhs, dtype=bool)
    ulc_bad &= live
    return {"prime": prime_bad, "double_prime": slc_bad, "triple_prime": ulc_bad,
            "live": live, "checked": checked, "skipped": skipped}


def verify_mukl_all(model: UrnModel) -> dict:
    """Every partition (I, J, K) and every K-window; one verdict per variant.

    ``info`` of each verdict carries the instance count; the returned dict
    also has ``agreement`` (prime and double_prime flag the same instances)
    and ``ulc_implies_slc`` (no instance fails double_prime but passes
    triple_prime).
    """
    out = {v: None for v in MUKL_VARIANTS}
    counts = {"instances": 0, "skipped": 0, "checked": 0}
    agree = True
    implies = True
    for I, J, K, wins, P in mukl_tables(model):
        fl = mukl_flags(model, P)
        live = fl["live"]
        counts["instances"] += int(live.sum())
        counts["skipped"] += fl["skipped"]
        counts["checked"] += fl["checked"]
        if (fl["prime"] != fl["double_prime"])[live].any():
            agree = False
        if (fl["double_prime"] & ~fl["triple_prime"])[live].any():
            implies = False
        for variant in MUKL_VARIANTS:
            if out[variant] is None and fl[variant].any():
                pos = [int(i) for i in np.argwhere(fl[variant])[0]]
                Q = {j: wins[w] for j, w in zip(K, pos)}
                out[variant] = V.violated(f"mukl_{variant}", {"I": list(I), "J": list(J), "Q": Q,
                                                              "model": model.to_dict()})
    res = {}
    for variant in MUKL_VARIANTS:
        v = out[variant] or V.holds(f"mukl_{variant}")
        v.checked = counts["checked"] if variant == "prime" else counts["instances"]
        v.skipped = counts["skipped"] if variant == "prime" else 0
        v.info["instances"] = counts["instances"]
        res[variant] = v
    res["agreement"] = agree
    res["ulc_implies_slc"] = implies
    return res


# -- lattice conditions --------------------------------------------------------

def m_f_table(model: UrnModel, f) -> dict:
    """M_f(a) = weight of {a_j <= B_j <= a_j + f_j for all j}, a in [0, m]^n (unnormalized)."""
    m, n = model.m, model.n
    f = [int(x) for x in f]
    if len(f) != n or any(x < 0 for x in f):
        raise DimensionError(f"f needs {n} nonnegative entries")
    T = occupancy_tensor(model)
    for j in range(n):
        M = np.zeros((m + 1, m + 1), dtype=object)
        for a in range(m + 1):
            M[a, a:min(a + f[j], m) + 1] = 1
        T = np.moveaxis(np.tensordot(M, T, axes=([1], [j])), 0, j)
    return {tuple(int(x) for x in idx): int(T[tuple(idx)]) for idx in np.argwhere(T != 0)}


def verify_propcvx_cornlc(model: UrnModel, f) -> V.Verdict:
    """Support of M_f is convex and M_f(a) M_f(c) >= M_f(a∨c) M_f(a∧c)."""
    M = m_f_table(model, f)
    cv = check_support_convex(M)
    nl = check_nlc(M, "negative")
    v = V.combine("propcvx_cornlc", [cv, nl])
    if v.violated:
        v.witness = dict(v.witness, model=model.to_dict(), f=list(f))
    return v


def nlcf_values(model: UrnModel, Q: ConditioningEvent, cap: int = ENUMERATION_CAP) -> dict:
    """f(A) = sum of W(sigma) over sigma: A -> K with K-counts inside Q's windows."""
    m = model.m
    if 2 ** m > cap:
        raise CapExceededError(f"2^m = {2 ** m} exceeds cap {cap}")
    K = sorted(Q.urns)
    if not K:
        raise ValueError("Q must constrain at least one urn")
    if any(not 0 <= j < model.n for j in K):
        raise DimensionError("Q names a nonexistent urn")
    rows = model.int_rows()
    caps = [min(Q.windows[j][1] + 1, m) for j in K]
    out = {}
    for r in range(m + 1):
        for A in itertools.combinations(range(m), r):
            sub = [[rows[i][j] for j in K] for i in A]
            if any(not any(row) for row in sub):
                out[frozenset(A)] = 0
                continue
            total = 0
            for st, w in block_weights(sub, [(c,) for c in range(len(K))], caps).items():
                if all(Q.windows[j][0] <= x <= Q.windows[j][1] for j, x in zip(K, st)):
                    total += w
            out[frozenset(A)] = total
    return out


def verify_nlcf(model: UrnModel, Q: ConditioningEvent) -> V.Verdict:
    """f(A ∪ B) f(A ∩ B) <= f(A) f(B) for all A, B ⊆ [m]."""
    f = nlcf_values(model, Q)
    v = check_nlc(subset_function(model.m, f), "negative")
    v.name = "nlcf"
    if v.violated:
        v.witness = dict(v.witness, model=model.to_dict(), Q=Q.to_dict())
    return v


# -- increasing families ---------------------------------------------------------

def subset_window_table(model: UrnModel, cap: int = ENUMERATION_CAP):
    """H[S, w_0, ..., w_{n-2}]: weight of {sigma^{-1}(last) = S} on each window combination."""
    m, n = model.m, model.n
    if 2 ** m > cap:
        raise CapExceededError(f"2^m = {2 ** m} exceeds cap {cap}")
    rows = model.int_rows()
    subsets = [frozenset(S) for r in range(m + 1) for S in itertools.combinations(range(m), r)]
    H = np.zeros((len(subsets),) + (m + 1,) * (n - 1), dtype=object)
    for s, S in enumerate(subsets):
        head = 1
        for i in S:
            head *= rows[i][n - 1]
        if not head:
            continue
        rest = [rows[i][:n - 1] for i in range(m) if i not in S]
        if any(not any(r) for r in rest):
            continue
        for st, w in block_weights(rest, [(j,) for j in range(n - 1)], [m] * (n - 1)).items():
            H[(s,) + st] += head * w
    wins = windows(m)
    return subsets, wins, window_transform(H, range(1, n), window_matrix(wins, m))


def verify_dr26(model: UrnModel, family: IncreasingFamily) -> V.Verdict:
    """p(A,a,b) >= p(A,a',b') for every single-step increase, both windows possible."""
    if family.m != model.m:
        raise DimensionError("family and model disagree on m")
    m, n = model.m, model.n
    subsets, wins, H = subset_window_table(model)
    inA = np.array([1 if S in family else 0 for S in subsets], dtype=object)
    num = np.tensordot(inA, H, axes=([0], [0]))
    den = H.sum(axis=0)
    pairs = _neighbours(wins, m)
    checked = skipped = 0
    for j in range(n - 1):
        if not len(pairs):
            break
        n0, d0 = np.take(num, pairs[:, 0], axis=j), np.take(den, pairs[:, 0], axis=j)
        n1, d1 = np.take(num, pairs[:, 1], axis=j), np.take(den, pairs[:, 1], axis=j)
        skip = np.asarray((d0 == 0) | (d1 == 0), dtype=bool)
        bad = np.asarray(n0 * d1 < n1 * d0, dtype=bool) & ~skip
        skipped += int(skip.sum())
        checked += int((~skip).sum())
        if bad.any():
            pos = [int(i) for i in np.argwhere(bad)[0]]
            lo_w, hi_w = list(pos), list(pos)
            lo_w[j], hi_w[j] = int(pairs[pos[j], 0]), int(pairs[pos[j], 1])
            a, b = _decode(model, wins, lo_w)
            a2, b2 = _decode(model, wins, hi_w)
            return V.violated("dr26", {"a": a, "b": b, "a_next": a2, "b_next": b2,
                                       "family": family.to_dict(), "model": model.to_dict()},
                              checked, skipped)
    return V.holds("dr26", checked, skipped)


# -- CNA of interval urn measures ---------------------------------------------------

def verify_interval_cna(model: UrnModel, spec: IntervalSpec) -> V.Verdict:
    """CNA of the interval urn measure; i.i.d. rows are covered by a theorem.

    For non-i.i.d. rows the check still runs; a violation there is flagged
    ``escalate`` as a witness for the open generalized-urn question.
    """
    mu = interval_urn_measure(model, spec)
    v = check_cna(mu)
    v.name = "interval_cna"
    v.info["iid"] = model.iid_flag
    if v.violated:
        v.witness = dict(v.witness, model=model.to_dict(), spec=spec.to_dict())
        if not model.iid_flag:
            v.info["escalate"] = "generalized_cna_question"
    return v


# -- suites -------------------------------------------------------------------------

class TheoremSuite(V.Report):
    """A Report whose instances are (model, verdict) pairs for one theorem."""


def check_instance(theorem: str, model: UrnModel, rng, **kw):
    """One model under one theorem; returns (verdict, extra instance data)."""
    extra = {}
    if theorem == "mainthm-a":
        v = verify_mainthm_a(model)
    elif theorem == "mainthm-b":
        v = verify_mainthm_b(model, kw.get("a"), kw.get("b"))
    elif theorem.startswith("mukl"):
        v = verify_mukl_all(model)[theorem[5:].replace("-", "_")]
    elif theorem == "propcvx-cornlc":
        f = kw.get("f") or [rng.randint(0, model.m) for _ in range(model.n)]
        extra["f"] = list(f)
        v = verify_propcvx_cornlc(model, f)
    elif theorem == "nlcf":
        K = sorted(rng.sample(range(model.n), rng.randint(1, model.n)))
        wins = {}
        for j in K:
            lo = rng.randint(0, model.m)
            wins[j] = (lo, rng.randint(lo, model.m))
        Q = ConditioningEvent(wins)
        extra["Q"] = Q.to_dict()
        v = verify_nlcf(model, Q)
    elif theorem == "dr26":
        fam = random_increasing_family(rng, model.m)
        extra["family"] = fam.to_dict()
        v = verify_dr26(model, fam)
    elif theorem == "interval-cna":
        spec = random_interval_spec(rng, model.m, model.n)
        extra["spec"] = spec.to_dict()
        v = verify_interval_cna(model, spec)
    else:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")
    return v, extra


def _suite_item(args):
    theorem, gamma, seed, idx, kw = args
    model = UrnModel(gamma)
    v, extra = check_instance(theorem, model, random.Random(f"{seed}:{idx}"), **kw)
    return v, extra


def run_suite(theorem: str, models, seed=0, jobs: int = 1, **kw) -> TheoremSuite:
    """Run one theorem check over a list of models.

    Extra random data (window widths, windows, increasing families, interval
    specs) is drawn per model from a generator seeded by ``(seed, index)``,
    so results do not depend on ``jobs``.
    """
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")
    models = list(models)
    suite = TheoremSuite(theorem, dict(kw, seed=seed, models=len(models)))
    work = [(theorem, m.gamma, seed, i, kw) for i, m in enumerate(models)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_suite_item, work))
    else:
        results = [_suite_item(w) for w in work]
    for model, (v, extra) in zip(models, results):
        suite.add(v, model=model.to_dict(), **extra)
    return suite
