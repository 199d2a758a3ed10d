"""Negative correlation and negative association checkers.

All comparisons are exact: masses are scaled to integers by their common
denominator ``D`` and ``mu(A ∩ B) <= mu(A) mu(B)`` is tested as
``D * S_AB <= S_A * S_B``.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from . import verdict as V
from .errors import CapExceededError, ZeroProbabilityError
from .measures import (FiniteMeasure, condition, external_field, minimal_elements,
                       partial_fixings, upsets)

MAX_UPSETS = 10_000


def _tail_ints(ints, coord, level):
    return sum(w for eta, w in ints.items() if eta[coord] >= level)


def check_nc(mu: FiniteMeasure) -> V.Verdict:
    """NC: {eta_i >= s} and {eta_j >= t} negatively correlated for all i != j, s, t."""
    ints, d = mu.scaled()
    sizes = mu.space.sizes
    checked = 0
    for i, j in itertools.combinations(range(mu.ndim), 2):
        for s in range(1, sizes[i]):
            a = _tail_ints(ints, i, s)
            for t in range(1, sizes[j]):
                b = _tail_ints(ints, j, t)
                ab = sum(w for eta, w in ints.items() if eta[i] >= s and eta[j] >= t)
                checked += 1
                if d * ab > a * b:
                    return V.violated("nc", {
                        "i": i, "j": j, "s": s, "t": t,
                        "joint": Fraction(ab, d), "product": Fraction(a * b, d * d),
                    }, checked)
    return V.holds("nc", checked)


def check_cnc(mu: FiniteMeasure) -> V.Verdict:
    """CNC: NC for every conditional law given the values of some coordinates."""
    checked = 0
    for fixing in partial_fixings(mu):
        nu = condition(mu, fixing) if fixing else mu
        v = check_nc(nu)
        checked += v.checked
        if v.violated:
            free = [i for i in range(mu.ndim) if i not in fixing]
            w = dict(v.witness)
            w["i"], w["j"] = free[w["i"]], free[w["j"]]
            w["fixing"] = fixing
            return V.violated("cnc", w, checked)
    return V.holds("cnc", checked)


def _as_array(values, big):
    return np.array(values, dtype=object if big else np.int64)


def check_na(mu: FiniteMeasure, max_upsets: int = MAX_UPSETS) -> V.Verdict:
    """NA: A and B negatively correlated for increasing A, B with no common affecting coordinate.

    Any such pair depends on disjoint coordinate sets I and J, and can be
    regarded as depending on a partition (I, complement). So every unordered
    partition is visited and every nontrivial up-set of each side is paired
    with every one of the other side. If a side has more than ``max_upsets``
    up-sets the verdict is inconclusive unless another partition already
    yields a violation.
    """
    n = mu.ndim
    if n < 2:
        return V.holds("na", 0)
    ints, d = mu.scaled()
    big = d >= 2 ** 31
    sizes = mu.space.sizes
    checked = 0
    capped = None
    for r in range(1, n):
        for I in itertools.combinations(range(n), r):
            if 0 not in I:
                continue
            J = tuple(c for c in range(n) if c not in I)
            try:
                ipts, imasks = upsets([sizes[c] for c in I], max_upsets)
                jpts, jmasks = upsets([sizes[c] for c in J], max_upsets)
            except CapExceededError as exc:
                capped = capped or str(exc)
                continue
            iidx = {p: k for k, p in enumerate(ipts)}
            jidx = {p: k for k, p in enumerate(jpts)}
            P = [[0] * len(jpts) for _ in ipts]
            for eta, w in ints.items():
                P[iidx[tuple(eta[c] for c in I)]][jidx[tuple(eta[c] for c in J)]] += w
            ifull, jfull = (1 << len(ipts)) - 1, (1 << len(jpts)) - 1
            imasks = [x for x in imasks if x not in (0, ifull)]
            jmasks = [x for x in jmasks if x not in (0, jfull)]
            if not imasks or not jmasks:
                continue
            A = _as_array([[x >> k & 1 for k in range(len(ipts))] for x in imasks], False)
            B = _as_array([[x >> k & 1 for k in range(len(jpts))] for x in jmasks], False)
            Pm = _as_array(P, big)
            if big:
                A, B = A.astype(object), B.astype(object)
            AP = A @ Pm                      # (nA, nJ)
            joint = AP @ B.T                 # (nA, nB)
            sa = AP.sum(axis=1)
            sb = B @ Pm.sum(axis=0)
            rhs = np.outer(sa, sb)
            lhs = joint * d
            checked += joint.size
            bad = np.argwhere(lhs > rhs)
            if len(bad):
                a_i, b_i = bad[0]
                ev_a = [ipts[k] for k in range(len(ipts)) if imasks[a_i] >> k & 1]
                ev_b = [jpts[k] for k in range(len(jpts)) if jmasks[b_i] >> k & 1]
                return V.violated("na", {
                    "I": list(I), "J": list(J),
                    "A_minimal": [list(p) for p in minimal_elements(ev_a)],
                    "B_minimal": [list(p) for p in minimal_elements(ev_b)],
                    "joint": Fraction(int(joint[a_i, b_i]), d),
                    "product": Fraction(int(sa[a_i]) * int(sb[b_i]), d * d),
                }, checked)
    if capped:
        return V.inconclusive("na", capped, checked)
    return V.holds("na", checked)


def check_cna(mu: FiniteMeasure, max_upsets: int = MAX_UPSETS) -> V.Verdict:
    """CNA: NA for every positive-probability conditioning on some coordinates."""
    checked = 0
    capped = None
    for fixing in partial_fixings(mu):
        nu = condition(mu, fixing) if fixing else mu
        v = check_na(nu, max_upsets)
        checked += v.checked
        if v.violated:
            free = [i for i in range(mu.ndim) if i not in fixing]
            w = dict(v.witness)
            w["I"] = [free[c] for c in w["I"]]
            w["J"] = [free[c] for c in w["J"]]
            w["fixing"] = fixing
            return V.violated("cna", w, checked)
        if v.inconclusive:
            capped = capped or v.info["reason"]
    if capped:
        return V.inconclusive("cna", capped, checked)
    return V.holds("cna", checked)


# -- external-field falsifiers -------------------------------------------------

FIELD_MODES = ("rayleigh", "na_plus", "r_plus")
_GRID = {
    "rayleigh": [Fraction(0), Fraction(1, 4), Fraction(1), Fraction(4)],
    "na_plus": [Fraction(0), Fraction(1, 4), Fraction(1), Fraction(4)],
    "r_plus": [Fraction(0), Fraction(1), Fraction(4)],
}
GRID_LIMIT = 4096


def _random_field(rng: random.Random, n: int, mode: str):
    out = []
    for _ in range(n):
        if mode == "r_plus":
            if rng.random() < 0.2:
                out.append(Fraction(0))
            else:
                out.append(1 + Fraction(rng.randint(0, 24), rng.randint(1, 4)))
        else:
            if rng.random() < 0.1:
                out.append(Fraction(0))
            else:
                out.append(Fraction(rng.randint(1, 12), rng.randint(1, 12)))
    return out


def field_vectors(n: int, mode: str, samples: int, seed):
    """Deterministic grid (when small enough) followed by seeded random fields."""
    if mode not in FIELD_MODES:
        raise ValueError(f"mode must be one of {FIELD_MODES}")
    grid = _GRID[mode]
    yield [Fraction(1)] * n
    if len(grid) ** n <= GRID_LIMIT:
        yield from (list(w) for w in itertools.product(grid, repeat=n))
    rng = random.Random(seed)
    for _ in range(samples):
        yield _random_field(rng, n, mode)


def falsify_fields(mu: FiniteMeasure, mode: str = "rayleigh", samples: int = 200,
                   seed=0, max_upsets: int = MAX_UPSETS) -> V.Verdict:
    """Search for an external field W with W∘mu not NC (or not NA, for na_plus).

    A "holds" verdict only means no violation was found among the fields
    tried; it is never a certificate (``info["certified"]`` is False).
    """
    if not mu.space.is_binary:
        raise ValueError("external fields need binary coordinates")
    trials = 0
    checked = 0
    for W in field_vectors(mu.ndim, mode, samples, seed):
        try:
            nu = external_field(mu, W)
        except ZeroProbabilityError:
            continue
        trials += 1
        v = check_na(nu, max_upsets) if mode == "na_plus" else check_nc(nu)
        checked += v.checked
        if v.violated:
            return V.violated(f"falsify_{mode}", {"field": W, "sub": v.witness}, checked,
                              trials=trials, mode=mode)
    return V.holds(f"falsify_{mode}", checked, trials=trials, mode=mode, certified=False,
                   note=f"no violation found in {trials} trials")
