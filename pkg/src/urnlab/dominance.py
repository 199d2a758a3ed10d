"""Stochastic dominance via monotone couplings, and the normalized matching property.

mu ⪰ nu iff there is a coupling (X, Y) with X ~ mu, Y ~ nu and X >= Y almost
surely (Strassen). The coupling exists iff the transportation network
source -> x (capacity mu(x)), x -> y for x >= y (unbounded), y -> sink
(capacity nu(y)) carries a flow of value 1. Capacities are scaled to
integers and the flow is found with shortest augmenting paths.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from . import verdict as V
from ._rational import common_scale
from .errors import DimensionError, ZeroProbabilityError
from .measures import FiniteMeasure, leq, minimal_elements, upsets


def max_flow(n_nodes: int, edges, source: int, sink: int):
    """Edmonds-Karp on integer capacities; ``None`` capacity means unbounded.

    Args:
        edges: iterable of (u, v, capacity).

    Returns:
        (flow value, set of nodes reachable from the source in the final
        residual network; these form the source side of a minimum cut).
    """
    graph = [[] for _ in range(n_nodes)]
    cap = []
    to = []
    finite_total = 0
    raw = list(edges)
    for _, _, c in raw:
        if c is not None:
            finite_total += c
    inf = finite_total + 1
    for u, v, c in raw:
        c = inf if c is None else c
        graph[u].append(len(to)); to.append(v); cap.append(c)
        graph[v].append(len(to)); to.append(u); cap.append(0)
    flow = 0
    while True:
        parent = [-1] * n_nodes
        parent[source] = -2
        queue = deque([source])
        while queue and parent[sink] == -1:
            u = queue.popleft()
            for e in graph[u]:
                if cap[e] > 0 and parent[to[e]] == -1:
                    parent[to[e]] = e
                    queue.append(to[e])
        if parent[sink] == -1:
            return flow, {v for v in range(n_nodes) if parent[v] != -1}
        push = None
        v = sink
        while v != source:
            e = parent[v]
            push = cap[e] if push is None else min(push, cap[e])
            v = to[e ^ 1]
        v = sink
        while v != source:
            e = parent[v]
            cap[e] -= push
            cap[e ^ 1] += push
            v = to[e ^ 1]
        flow += push


def _flow_dominance(mu: dict, nu: dict):
    """Return (mu ⪰ nu, minimal points of a violating up-set or None)."""
    xs = sorted(p for p, w in mu.items() if w)
    ys = sorted(p for p, w in nu.items() if w)
    d = common_scale(list(mu.values()) + list(nu.values()))
    src, snk = 0, 1
    xi = {x: 2 + i for i, x in enumerate(xs)}
    yi = {y: 2 + len(xs) + i for i, y in enumerate(ys)}
    edges = [(src, xi[x], int(mu[x] * d)) for x in xs]
    edges += [(yi[y], snk, int(nu[y] * d)) for y in ys]
    edges += [(xi[x], yi[y], None) for x in xs for y in ys if leq(y, x)]
    need = int(sum(nu.values()) * d)
    flow, reach = max_flow(2 + len(xs) + len(ys), edges, src, snk)
    if flow == need:
        return True, None
    # y outside the source side: every x >= y is outside too, so the up-closure
    # of these y has mu-mass <= cut part on the x side < its nu-mass
    gens = [y for y in ys if yi[y] not in reach]
    return False, gens


def dominates_by_flow(mu: dict, nu: dict) -> bool:
    """mu ⪰ nu for point masses given as dicts over a common poset."""
    return _flow_dominance(mu, nu)[0]


def _same_space(mu: FiniteMeasure, nu: FiniteMeasure):
    if mu.space != nu.space:
        raise DimensionError(f"spaces differ: {mu.space.sizes} vs {nu.space.sizes}")


def stochastic_dominance(mu: FiniteMeasure, nu: FiniteMeasure) -> V.Verdict:
    """Decide mu ⪰ nu by monotone-coupling feasibility.

    On failure the witness is an increasing event (by its generators) with
    mu(A) < nu(A), read off a minimum cut.
    """
    _same_space(mu, nu)
    ok, gens = _flow_dominance(mu.mass, nu.mass)
    if ok:
        return V.holds("dominance", 1)
    inside = lambda p: any(leq(g, p) for g in gens)
    return V.violated("dominance", {"event_generators": [list(g) for g in minimal_elements(gens)],
                                    "mu": mu.prob(inside), "nu": nu.prob(inside)}, 1)


def dominance_by_events(mu: FiniteMeasure, nu: FiniteMeasure, cap: int = 100_000) -> V.Verdict:
    """Oracle: mu(A) >= nu(A) for every increasing A, by explicit enumeration."""
    _same_space(mu, nu)
    points, masks = upsets(mu.space.sizes, cap)
    mvec = [mu[p] for p in points]
    nvec = [nu[p] for p in points]
    for k, mask in enumerate(masks):
        a = sum((mvec[i] for i in range(len(points)) if mask >> i & 1), Fraction(0))
        b = sum((nvec[i] for i in range(len(points)) if mask >> i & 1), Fraction(0))
        if a < b:
            event = [points[i] for i in range(len(points)) if mask >> i & 1]
            return V.violated("dominance_events", {"event": event, "mu": a, "nu": b}, k + 1)
    return V.holds("dominance_events", len(masks))


def rank_slices(mu: FiniteMeasure) -> dict:
    """Conditional laws mu(. | |eta| = k) for every nonempty rank k."""
    if not mu.space.is_binary:
        raise DimensionError("rank slices need {0,1}^m")
    out = {}
    for k, r in enumerate(mu.rank_sequence()):
        if r:
            out[k] = {eta: p / r for eta, p in mu.mass.items() if sum(eta) == k}
    return out


def check_normalized_matching(mu: FiniteMeasure) -> V.Verdict:
    """mu(. | rank k) ⪰ mu(. | rank k') for consecutive nonempty ranks k' < k."""
    slices = rank_slices(mu)
    ranks = sorted(slices)
    empty = [k for k in range(ranks[0], ranks[-1] + 1) if k not in slices]
    checked = 0
    for lo, hi in zip(ranks, ranks[1:]):
        checked += 1
        if not dominates_by_flow(slices[hi], slices[lo]):
            return V.violated("normalized_matching",
                              {"lower_rank": lo, "upper_rank": hi,
                               "lower_support": sorted(slices[lo]),
                               "upper_support": sorted(slices[hi])},
                              checked, skipped_ranks=empty)
    return V.holds("normalized_matching", checked, skipped_ranks=empty)


def conditional_on_rank(mu: FiniteMeasure, k: int) -> FiniteMeasure:
    """mu(. | |eta| = k) as a measure on the full space."""
    sl = rank_slices(mu).get(k)
    if sl is None:
        raise ZeroProbabilityError(f"rank {k} has zero mass")
    return FiniteMeasure(mu.space, sl)
