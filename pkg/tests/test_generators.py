import itertools
import random
from collections import defaultdict

import networkx as nx
import pytest

from urnlab.generators import (all_thresholds, canonical_key, connected_multigraphs,
                               cover_hypergraphs, iid_models_grid, multigraphs,
                               random_bipartite, random_interval_spec, random_models)


def _nx_multigraph(n, edges):
    G = nx.MultiGraph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges)
    return G


def _iso_classes(graphs, **match):
    """Dedupe networkx graphs up to isomorphism, bucketing by WL hash first."""
    buckets = defaultdict(list)
    count = 0
    for G in graphs:
        h = nx.weisfeiler_lehman_graph_hash(nx.Graph(G), node_attr=match.get("node_attr"))
        if not any(nx.is_isomorphic(G, H, node_match=match.get("node_match"),
                                    edge_match=match.get("edge_match"))
                   for H in buckets[h]):
            buckets[h].append(G)
            count += 1
    return count


def _brute_multigraphs(k, connected):
    out = []
    for n in range(1, 2 * k + 1):
        slots = [(u, v) for u in range(n) for v in range(u, n)]
        for edges in itertools.combinations_with_replacement(slots, k):
            G = _nx_multigraph(n, edges)
            if any(d == 0 for _, d in G.degree()):
                continue
            if connected and not nx.is_connected(G):
                continue
            out.append(G)
    return out


def test_connected_counts():
    got = connected_multigraphs(6)
    assert [len(got[k]) for k in range(1, 7)] == [2, 4, 11, 30, 95, 328]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_connected_counts_match_networkx(k):
    assert len(connected_multigraphs(k)[k]) == _iso_classes(_brute_multigraphs(k, True))


def test_all_multigraphs_match_networkx():
    total = sum(_iso_classes(_brute_multigraphs(k, False)) for k in range(1, 4))
    assert sum(1 for _ in multigraphs(3)) == total


def test_multigraph_total():
    assert sum(1 for _ in multigraphs(5)) == 385
    assert sum(1 for _ in multigraphs(4, connected=True)) == 2 + 4 + 11 + 30


def test_generated_multigraphs_are_pairwise_distinct():
    keys = [canonical_key(G.n, G.edges) for G in multigraphs(4)]
    assert len(keys) == len(set(keys))
    for G in multigraphs(4):
        assert min(G.degrees) > 0


def test_canonical_key_is_invariant():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 5)
        edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 6))]
        perm = list(range(n))
        rng.shuffle(perm)
        moved = [(perm[u], perm[v]) for u, v in edges]
        assert canonical_key(n, edges) == canonical_key(n, moved)


# -- cover hypergraphs ------------------------------------------------------------

def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _matchings(items):
    yield []
    for i, j in itertools.combinations(items, 2):
        rest = [x for x in items if x > i and x not in (i, j)]
        for M in _matchings(rest):
            yield [(i, j)] + M


def _hyper_graph(ground, blocks, pairs):
    G = nx.Graph()
    for x in range(ground):
        G.add_node(("w", x), kind="w")
    for i, B in enumerate(blocks):
        G.add_node(("b", i), kind="b")
        for x in B:
            G.add_edge(("w", x), ("b", i), kind="in")
    for u, v in pairs:
        G.add_edge(("w", u), ("w", v), kind="pair")
    return G


def _brute_cover_classes(ground):
    W = list(range(ground))
    graphs = []
    seen = set()
    for M in _matchings(W):
        if ground - 2 * len(M) < 2:
            continue
        key = tuple(M)
        if key in seen:
            continue
        seen.add(key)
        for P in _set_partitions(W):
            graphs.append(_hyper_graph(ground, P, M))
    same = lambda a, b: a["kind"] == b["kind"]
    return _iso_classes(graphs, node_attr="kind", node_match=same, edge_match=same)


def test_cover_hypergraphs_match_networkx():
    by_ground = defaultdict(int)
    for H in cover_hypergraphs(6):
        assert len(H.S) >= 2
        assert sorted(x for B in H.h1 for x in B) == list(range(H.ground))
        by_ground[H.ground] += 1
    for ground in (2, 4, 6):
        assert by_ground[ground] == _brute_cover_classes(ground)


def test_cover_hypergraph_total():
    assert sum(1 for _ in cover_hypergraphs(12)) == 16004


# -- seeded instances ---------------------------------------------------------------

def test_random_models_are_seeded():
    a = random_models(7, 20, state_cap=200)
    b = random_models(7, 20, state_cap=200)
    assert [M.to_dict() for M in a] == [M.to_dict() for M in b]
    assert all(M.n ** M.m <= 200 for M in a)
    assert [M.to_dict() for M in a] != [M.to_dict() for M in random_models(8, 20, state_cap=200)]
    assert all(M.iid_flag for M in random_models(1, 10, iid=True))


def test_other_random_generators_are_seeded():
    def draw(seed):
        rng = random.Random(seed)
        return ([random_bipartite(rng).to_dict() for _ in range(5)],
                [random_interval_spec(rng, 3, 3).cuts for _ in range(5)])
    assert draw(11) == draw(11)
    for B in draw(11)[0]:
        assert all(lo <= up for lo, up in zip(B["lower"], B["upper"]))


def test_grids():
    grid = iid_models_grid()
    assert all(M.iid_flag for M in grid)
    assert len(list(all_thresholds(2, 3))) == 4 ** 3
