"""Seeded random instances and exhaustive families of small combinatorial objects."""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from fractions import Fraction

from .orientations import BipartiteSystem, CoverHypergraph, Multigraph
from .urns import IncreasingFamily, IntervalSpec, UrnModel

MAX_PART = 8


def random_rational(rng: random.Random, zero_prob: float = 0.0) -> Fraction:
    """Nonnegative rational with numerator and denominator at most 8."""
    if zero_prob and rng.random() < zero_prob:
        return Fraction(0)
    return Fraction(rng.randint(1, MAX_PART), rng.randint(1, MAX_PART))


def random_row(rng: random.Random, n: int, zero_prob: float = 0.15) -> list:
    while True:
        row = [random_rational(rng, zero_prob) for _ in range(n)]
        if any(row):
            return row


def random_model(rng: random.Random, m: int, n: int, iid: bool = False,
                 zero_prob: float = 0.15) -> UrnModel:
    if iid:
        return UrnModel.iid(m, random_row(rng, n, zero_prob))
    return UrnModel([random_row(rng, n, zero_prob) for _ in range(m)])


def random_models(seed, count: int, m_max: int = 5, n_max: int = 4, iid: bool = False,
                  state_cap: int | None = None, m_min: int = 1, n_min: int = 2):
    """``count`` models with sizes drawn uniformly; ``state_cap`` bounds n^m."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = rng.randint(m_min, m_max)
        n = rng.randint(n_min, n_max)
        if state_cap is not None and n ** m > state_cap:
            continue
        out.append(random_model(rng, m, n, iid=iid))
    return out


def random_interval_spec(rng: random.Random, m: int, n: int, max_cells: int = 3) -> IntervalSpec:
    cuts = []
    for _ in range(n):
        k = rng.randint(1, min(max_cells, m + 1))
        inner = sorted(rng.sample(range(1, m + 1), k - 1))
        cuts.append([0] + inner + [m + 1])
    return IntervalSpec(m, cuts)


def random_increasing_family(rng: random.Random, m: int, max_generators: int = 3) -> IncreasingFamily:
    gens = []
    for _ in range(rng.randint(1, max_generators)):
        gens.append([i for i in range(m) if rng.random() < 0.5])
    return IncreasingFamily.generated_by(m, gens)


def random_bipartite(rng: random.Random, nv_max: int = 8, nk_max: int = 4,
                     density: float = 0.5) -> BipartiteSystem:
    nv = rng.randint(1, nv_max)
    nk = rng.randint(1, nk_max)
    edges = [(v, j) for v in range(nv) for j in range(nk) if rng.random() < density]
    lower, upper = [], []
    for _ in range(nk):
        u = rng.randint(0, nv)
        lower.append(rng.randint(0, u))
        upper.append(u)
    return BipartiteSystem(nv, nk, edges, lower, upper)


def iid_models_grid(m_max: int = 4, n_max: int = 3, weights=(Fraction(1), Fraction(2), Fraction(1, 3))):
    """Deterministic i.i.d.-row models: uniform plus a few skewed column laws."""
    out = []
    for m in range(1, m_max + 1):
        for n in range(2, n_max + 1):
            out.append(UrnModel.uniform(m, n))
            out.append(UrnModel.iid(m, [weights[j % len(weights)] for j in range(n)]))
            out.append(UrnModel.iid(m, [Fraction(j + 1) for j in range(n)]))
    return out


def all_thresholds(m: int, n: int):
    return itertools.product(range(m + 2), repeat=n)


# -- canonical forms ---------------------------------------------------------------

def _refine(n, edges, marks):
    adj = defaultdict(list)
    deg = [0] * n
    loops = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
        if u == v:
            loops[u] += 1
        else:
            adj[u].append(v)
            adj[v].append(u)
    colour = [(marks[x], deg[x], loops[x]) for x in range(n)]
    ranks = _rank(colour)
    while True:
        sig = [(ranks[x], tuple(sorted(ranks[y] for y in adj[x]))) for x in range(n)]
        new = _rank(sig)
        if len(set(new)) == len(set(ranks)):
            return new
        ranks = new


def _rank(values):
    order = {v: i for i, v in enumerate(sorted(set(values)))}
    return [order[v] for v in values]


def canonical_key(n: int, edges, marks=None):
    """Isomorphism-invariant key of a multigraph with integer vertex marks.

    Colour refinement splits vertices into classes; the key is the smallest
    relabelled (edges, marks) over permutations inside each class.
    """
    marks = list(marks) if marks is not None else [0] * n
    edges = [tuple(sorted(e)) for e in edges]
    colour = _refine(n, edges, marks)
    classes = defaultdict(list)
    for x in range(n):
        classes[colour[x]].append(x)
    ordered = [classes[c] for c in sorted(classes)]
    best = None
    for perms in itertools.product(*(itertools.permutations(c) for c in ordered)):
        order = [x for p in perms for x in p]
        pos = {x: i for i, x in enumerate(order)}
        key = (tuple(sorted(tuple(sorted((pos[u], pos[v]))) for u, v in edges)),
               tuple(marks[x] for x in order))
        if best is None or key < best:
            best = key
    return (n,) + best


def _from_key(key) -> Multigraph:
    return Multigraph(key[0], key[1])


def connected_multigraphs(max_edges: int) -> dict:
    """Connected multigraphs (loops, parallel edges) up to isomorphism, keyed by edge count."""
    levels = {0: [canonical_key(1, [])]}
    for k in range(1, max_edges + 1):
        seen = set()
        for key in levels[k - 1]:
            n, edges = key[0], list(key[1])
            for u in range(n):
                for v in range(u, n + 1):
                    nn = max(n, v + 1)
                    cand = canonical_key(nn, edges + [(u, v)])
                    seen.add(cand)
        levels[k] = sorted(seen)
    return {k: [_from_key(key) for key in keys] for k, keys in levels.items()}


def disjoint_union(graphs) -> Multigraph:
    n = 0
    edges = []
    for G in graphs:
        edges += [(u + n, v + n) for u, v in G.edges]
        n += G.n
    return Multigraph(n, edges)


def multigraphs(max_edges: int, connected: bool = False):
    """All multigraphs without isolated vertices and 1..max_edges edges, up to isomorphism.

    Disconnected graphs are generated as multisets of connected pieces.
    """
    pieces = connected_multigraphs(max_edges)
    if connected:
        for k in range(1, max_edges + 1):
            yield from pieces[k]
        return
    catalogue = [(k, i) for k in range(1, max_edges + 1) for i in range(len(pieces[k]))]

    def rec(start, budget, chosen):
        if chosen:
            yield disjoint_union(pieces[k][i] for k, i in chosen)
        for idx in range(start, len(catalogue)):
            k, i = catalogue[idx]
            if k <= budget:
                yield from rec(idx, budget - k, chosen + [(k, i)])

    yield from rec(0, max_edges, [])


# -- cover hypergraphs -----------------------------------------------------------

def _marked_components(max_points: int):
    """Connected block structures: (graph on blocks, marks per block, points used).

    A block is an H1 edge (or a single uncovered vertex), an edge joining two
    blocks is an H2 pair with one end in each, a mark is an S-vertex.
    """
    out = [(Multigraph(1, []), (j,), j) for j in range(1, max_points + 1)]
    graphs = connected_multigraphs(max_points // 2)
    for k in range(1, max_points // 2 + 1):
        for G in graphs[k]:
            spare = max_points - 2 * k
            seen = set()
            for r in range(spare + 1):
                for combo in itertools.combinations_with_replacement(range(G.n), r):
                    marks = [0] * G.n
                    for x in combo:
                        marks[x] += 1
                    key = canonical_key(G.n, G.edges, marks)
                    if key not in seen:
                        seen.add(key)
                        out.append((_from_key(key), key[2], 2 * k + r))
    return out


def _realize(parts) -> CoverHypergraph:
    h1, h2 = [], []
    nxt = 0
    for G, marks, _ in parts:
        blocks = [[] for _ in range(G.n)]
        for u, v in G.edges:
            h2.append((nxt, nxt + 1))
            blocks[u].append(nxt)
            blocks[v].append(nxt + 1)
            nxt += 2
        for x in range(G.n):
            for _ in range(marks[x]):
                blocks[x].append(nxt)
                nxt += 1
        h1.extend(blocks)
    return CoverHypergraph(nxt, h1, h2)


def cover_hypergraphs(max_ground: int = 12):
    """Every cover hypergraph with |W| <= max_ground and |S| >= 2, up to isomorphism.

    Uncovered vertices appear as singleton H1 edges; giving those demand 0
    recovers every hypergraph whose H1 does not cover W.
    """
    comps = _marked_components(max_ground)

    def rec(start, budget, marks, chosen):
        if chosen and marks >= 2 and marks % 2 == 0:
            yield _realize(chosen)
        for idx in range(start, len(comps)):
            c = comps[idx]
            if c[2] <= budget:
                yield from rec(idx, budget - c[2], marks + sum(c[1]), chosen + [c])

    yield from rec(0, max_ground, 0, [])
