"""Counting constrained orientations, hypergraph partitions, G-maps and matchings.

Vertices are ``0..n-1``. A loop ``(x, x)`` has two distinguishable
orientations and each adds 1 to both the out- and in-degree of ``x``; it
counts twice toward the degree ``d_x``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import verdict as V
from .errors import CapExceededError, DimensionError
from .sequences import check_ulc

EDGE_CAP = 24
CHUNK = 1 << 21


class Multigraph:
    """Loops and parallel edges allowed; edges are stored as sorted pairs."""

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        self.n = int(n)
        out = []
        for e in edges:
            u, v = (int(x) for x in e)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DimensionError(f"edge {(u, v)} has an endpoint outside 0..{self.n - 1}")
            out.append((min(u, v), max(u, v)))
        self.edges = tuple(sorted(out))

    @property
    def degrees(self) -> tuple:
        d = [0] * self.n
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return tuple(d)

    @property
    def loops(self) -> tuple:
        c = [0] * self.n
        for u, v in self.edges:
            if u == v:
                c[u] += 1
        return tuple(c)

    def components(self) -> list:
        """Vertex sets of connected components (isolated vertices included)."""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        groups = defaultdict(list)
        for x in range(self.n):
            groups[find(x)].append(x)
        return sorted(groups.values())

    def induced(self, vertices: Sequence[int]) -> "Multigraph":
        relabel = {x: i for i, x in enumerate(vertices)}
        return Multigraph(len(vertices), [(relabel[u], relabel[v]) for u, v in self.edges
                                          if u in relabel and v in relabel])

    def add_edge(self, u: int, v: int) -> "Multigraph":
        n = max(self.n, u + 1, v + 1)
        return Multigraph(n, self.edges + ((u, v),))

    def __eq__(self, other):
        return isinstance(other, Multigraph) and (self.n, self.edges) == (other.n, other.edges)

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Multigraph({self.n}, {list(self.edges)})"

    def to_dict(self) -> dict:
        return {"vertices": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data) -> "Multigraph":
        return cls(data["vertices"], data["edges"])


@dataclass(frozen=True)
class DegreeDemand:
    """Out-degree lower bounds ``a`` and in-degree lower bounds ``b``."""

    a: tuple
    b: tuple

    def __post_init__(self):
        a, b = tuple(int(x) for x in self.a), tuple(int(x) for x in self.b)
        if len(a) != len(b):
            raise DimensionError("a and b must have equal length")
        if any(x < 0 for x in a + b):
            raise ValueError("demands must be nonnegative")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def _demands(G: Multigraph, a, b):
    if isinstance(a, DegreeDemand):
        a, b = a.a, a.b
    a, b = tuple(int(x) for x in a), tuple(int(x) for x in b)
    if len(a) != G.n or len(b) != G.n:
        raise DimensionError(f"demands need {G.n} entries")
    if any(x < 0 for x in a + b):
        raise ValueError("demands must be nonnegative")
    return a, b


def count_orientations(G: Multigraph, a, b=None, cap: int = EDGE_CAP) -> int:
    """N_G(a, b): orientations with out-degree >= a_x and in-degree >= b_x everywhere.

    Depth-first over edges with memoization on the residual demands, pruning
    any branch where some vertex can no longer meet its demands.
    """
    a, b = _demands(G, a, b)
    E = G.edges
    if len(E) > cap:
        raise CapExceededError(f"{len(E)} edges exceeds cap {cap}")
    # rem[i][x] = (non-loop incidences, loops) at x among edges i..end
    rem = [None] * (len(E) + 1)
    cur_nl, cur_l = [0] * G.n, [0] * G.n
    rem[len(E)] = (tuple(cur_nl), tuple(cur_l))
    for i in range(len(E) - 1, -1, -1):
        u, v = E[i]
        if u == v:
            cur_l[u] += 1
        else:
            cur_nl[u] += 1
            cur_nl[v] += 1
        rem[i] = (tuple(cur_nl), tuple(cur_l))

    @lru_cache(maxsize=None)
    def go(i, need_out, need_in):
        nl, lp = rem[i]
        for x in range(G.n):
            if max(0, need_out[x] - lp[x]) + max(0, need_in[x] - lp[x]) > nl[x]:
                return 0
        if i == len(E):
            return 1
        u, v = E[i]
        if u == v:
            no, ni = list(need_out), list(need_in)
            no[u] = max(0, no[u] - 1)
            ni[u] = max(0, ni[u] - 1)
            return 2 * go(i + 1, tuple(no), tuple(ni))
        total = 0
        for s, t in ((u, v), (v, u)):
            no, ni = list(need_out), list(need_in)
            no[s] = max(0, no[s] - 1)
            ni[t] = max(0, ni[t] - 1)
            total += go(i + 1, tuple(no), tuple(ni))
        return total

    return go(0, a, b)


def orientation_degrees(G: Multigraph):
    """Yield (outdeg, indeg) tuples, one per orientation (loops doubled)."""
    for choice in itertools.product((0, 1), repeat=len(G.edges)):
        out, inn = [0] * G.n, [0] * G.n
        for (u, v), c in zip(G.edges, choice):
            s, t = (u, v) if c == 0 else (v, u)
            out[s] += 1
            inn[t] += 1
        yield tuple(out), tuple(inn)


def count_orientations_bruteforce(G: Multigraph, a, b=None) -> int:
    """Plain enumeration of all 2^|E| orientations (independent oracle)."""
    a, b = _demands(G, a, b)
    return sum(1 for out, inn in orientation_degrees(G)
               if all(o >= x for o, x in zip(out, a)) and all(i >= y for i, y in zip(inn, b)))


def orientation_table(G: Multigraph, cap: int = EDGE_CAP) -> np.ndarray:
    """N[a_0..a_{n-1}, b_0..b_{n-1}] for every demand with 0 <= a_x, b_x <= d_x."""
    if len(G.edges) > cap:
        raise CapExceededError(f"{len(G.edges)} edges exceeds cap {cap}")
    d = G.degrees
    shape = tuple(x + 1 for x in d) * 2
    hist = np.zeros(shape, dtype=np.int64)
    for out, inn in orientation_degrees(G):
        hist[out + inn] += 1
    for ax in range(len(shape)):
        hist = np.flip(np.cumsum(np.flip(hist, ax), axis=ax), ax)
    return np.ascontiguousarray(hist)


def _components_split(G: Multigraph):
    comps = [c for c in G.components() if any(G.degrees[x] for x in c)]
    return [(c, G.induced(c)) for c in comps]


def _lift(vec_parts, comp, n):
    full = [0] * n
    for x, val in zip(comp, vec_parts):
        full[x] = int(val)
    return full


def glemma_region(a: int, b: int, d: int):
    """(r, s) in [0, d]^2 with r <= a, s <= a and r + s <= a + b."""
    return [(r, s) for r in range(min(a, d) + 1) for s in range(min(a, d) + 1) if r + s <= a + b]


def _glemma_connected(G: Multigraph):
    N = orientation_table(G)
    n = G.n
    d = G.degrees
    T = N
    for x in range(n):
        D = d[x] + 1
        T2 = np.moveaxis(T, (x, n + x), (-2, -1))
        out = np.empty_like(T2)
        for a in range(D):
            for b in range(D):
                reg = glemma_region(a, b, d[x])
                rr = [r for r, _ in reg]
                ss = [s for _, s in reg]
                out[..., a, b] = T2[..., rr, ss].min(axis=-1)
        T = np.moveaxis(out, (-2, -1), (x, n + x))
    quads = 1
    for x in range(n):
        quads *= sum(len(glemma_region(a, b, d[x])) for a in range(d[x] + 1) for b in range(d[x] + 1))
    bad = np.argwhere(N > T)
    if len(bad):
        idx = tuple(int(i) for i in bad[0])
        a, b = idx[:n], idx[n:]
        target = N[idx]
        regions = [glemma_region(a[x], b[x], d[x]) for x in range(n)]
        for choice in itertools.product(*regions):
            r = tuple(c[0] for c in choice)
            s = tuple(c[1] for c in choice)
            if N[r + s] < target:
                return (a, b, r, s, int(target), int(N[r + s])), quads
    return None, quads


def verify_glemma(G: Multigraph, cap: int = EDGE_CAP) -> V.Verdict:
    """Check N(a,b) <= N(r,s) whenever a >= r, a >= s and a + b >= r + s.

    Demands range over 0..d_x. Every such quadruple is covered: the minimum
    of N(r, s) over the admissible (r, s) region, which is a product of
    per-vertex regions, is computed one vertex at a time. Connected
    components are handled separately; a violation on one component lifts
    to G with zero demands elsewhere.
    """
    if len(G.edges) > cap:
        raise CapExceededError(f"{len(G.edges)} edges exceeds cap {cap}")
    total = 0
    for comp, H in _components_split(G):
        w, quads = _glemma_connected(H)
        total += quads
        if w:
            a, b, r, s, nab, nrs = w
            return V.violated("glemma", {
                "a": _lift(a, comp, G.n), "b": _lift(b, comp, G.n),
                "r": _lift(r, comp, G.n), "s": _lift(s, comp, G.n),
                "N_ab": nab, "N_rs": nrs}, total)
    return V.holds("glemma", total)


def verify_glemma_bruteforce(G: Multigraph) -> V.Verdict:
    """Literal loop over every admissible quadruple (small graphs only)."""
    d = G.degrees
    n = G.n
    per = []
    for x in range(n):
        per.append([(a, b, r, s) for a in range(d[x] + 1) for b in range(d[x] + 1)
                    for r, s in glemma_region(a, b, d[x])])
    checked = 0
    cache = {}

    def N(a, b):
        if (a, b) not in cache:
            cache[a, b] = count_orientations_bruteforce(G, a, b)
        return cache[a, b]

    for choice in itertools.product(*per):
        a = tuple(c[0] for c in choice)
        b = tuple(c[1] for c in choice)
        r = tuple(c[2] for c in choice)
        s = tuple(c[3] for c in choice)
        checked += 1
        if N(a, b) > N(r, s):
            return V.violated("glemma", {"a": a, "b": b, "r": r, "s": s}, checked)
    return V.holds("glemma", checked)


def _gphcor_tuples(d):
    out = []
    for a in range(d + 1):
        for b in range(d + 1):
            for r in range(d + 1):
                s = a + b - r
                if 0 <= s <= d:
                    out.append((a, b, r, s))
    return out


def _gphcor_connected(G: Multigraph):
    N = orientation_table(G)
    flat = N.ravel()
    n = G.n
    d = G.degrees
    strides = [st // N.itemsize for st in N.strides]
    per = []
    for x in range(n):
        sa, sb = strides[x], strides[n + x]
        rows = []
        for a, b, r, s in _gphcor_tuples(d[x]):
            rows.append((a * sa + b * sb, r * sa + s * sb,
                         max(a, r) * sa + min(b, s) * sb, min(a, r) * sa + max(b, s) * sb))
        per.append(np.array(rows, dtype=np.int64))
    checked = 0

    def run(prefix_choice, offsets, rest):
        nonlocal checked
        # vectorize over the remaining vertices
        acc = offsets[None, :]
        for arr in rest:
            acc = (acc[:, None, :] + arr[None, :, :]).reshape(-1, 4)
        lhs = flat[acc[:, 0]] * flat[acc[:, 1]]
        rhs = flat[acc[:, 2]] * flat[acc[:, 3]]
        checked += len(acc)
        bad = np.nonzero(lhs < rhs)[0]
        if len(bad):
            return acc[bad[0]]
        return None

    sizes = [len(p) for p in per]
    split = 0
    while split < n and int(np.prod(sizes[split:])) > CHUNK:
        split += 1
    for head in itertools.product(*(range(s) for s in sizes[:split])):
        off = np.zeros(4, dtype=np.int64)
        for x, k in enumerate(head):
            off = off + per[x][k]
        hit = run(head, off, per[split:])
        if hit is not None:
            ab = np.unravel_index(int(hit[0]), N.shape)
            rs = np.unravel_index(int(hit[1]), N.shape)
            a, b = ab[:n], ab[n:]
            r, s = rs[:n], rs[n:]
            return (a, b, r, s), checked
    return None, checked


def verify_gphcor(G: Multigraph, cap: int = EDGE_CAP) -> V.Verdict:
    """Check N(a,b) N(r,s) >= N(a∨r, b∧s) N(a∧r, b∨s) whenever a + b = r + s."""
    if len(G.edges) > cap:
        raise CapExceededError(f"{len(G.edges)} edges exceeds cap {cap}")
    total = 0
    for comp, H in _components_split(G):
        w, checked = _gphcor_connected(H)
        total += checked
        if w:
            a, b, r, s = (_lift(v, comp, G.n) for v in w)
            return V.violated("gphcor", {"a": a, "b": b, "r": r, "s": s}, total)
    return V.holds("gphcor", total)


# -- cover hypergraphs ---------------------------------------------------------

class CoverHypergraph:
    """Ground set 0..2l-1 with disjoint H1 edges (demands alpha) and disjoint H2 pairs."""

    def __init__(self, ground: int, h1: Sequence[Iterable[int]], h2: Sequence[Sequence[int]],
                 alpha: Sequence[int] | None = None):
        self.ground = int(ground)
        if self.ground % 2:
            raise ValueError("|W| must be even")
        self.h1 = tuple(tuple(sorted(set(int(x) for x in H))) for H in h1)
        self.h2 = tuple(tuple(sorted(int(x) for x in e)) for e in h2)
        seen = set()
        for H in self.h1:
            if seen & set(H):
                raise ValueError("H1 edges must be pairwise disjoint")
            seen |= set(H)
        used = set()
        for e in self.h2:
            if len(set(e)) != 2:
                raise ValueError("H2 edges must have size 2")
            if used & set(e):
                raise ValueError("H2 edges must be pairwise disjoint")
            used |= set(e)
        if any(not 0 <= x < self.ground for x in seen | used):
            raise DimensionError("edge leaves the ground set")
        self.S = tuple(x for x in range(self.ground) if x not in used)
        if alpha is None:
            self.alpha = None
        else:
            self.alpha = tuple(int(a) for a in alpha)
            if len(self.alpha) != len(self.h1):
                raise DimensionError("one alpha per H1 edge")
            if any(a < 0 for a in self.alpha):
                raise ValueError("alpha must be nonnegative")

    @property
    def l(self) -> int:
        return self.ground // 2

    @property
    def t(self) -> int:
        return len(self.S) // 2

    def with_alpha(self, alpha) -> "CoverHypergraph":
        return CoverHypergraph(self.ground, self.h1, self.h2, alpha)

    def to_dict(self) -> dict:
        out = {"ground": self.ground, "h1": [list(H) for H in self.h1],
               "h2": [list(e) for e in self.h2]}
        if self.alpha is not None:
            out["alpha"] = list(self.alpha)
        return out

    @classmethod
    def from_dict(cls, data) -> "CoverHypergraph":
        return cls(data["ground"], data.get("h1", []), data.get("h2", []), data.get("alpha"))

    def __repr__(self):
        return (f"CoverHypergraph({self.ground}, h1={list(self.h1)}, h2={list(self.h2)}, "
                f"alpha={self.alpha})")

    def choices(self):
        """Yield every X that splits each H2 pair (X picks one end of each pair)."""
        for ends in itertools.product((0, 1), repeat=len(self.h2)):
            base = [e[c] for e, c in zip(self.h2, ends)]
            for r in range(len(self.S) + 1):
                for extra in itertools.combinations(self.S, r):
                    yield base + list(extra)


def count_partitions(H: CoverHypergraph, i: int) -> int:
    """N_i: partitions (X, Y) with |X| = i, X and Y both covering H2, |X∩E|, |Y∩E| >= alpha_E."""
    if H.alpha is None:
        raise ValueError("count_partitions needs alpha")
    count = 0
    for X in H.choices():
        if len(X) != i:
            continue
        Xs = set(X)
        if all(len(Xs & set(E)) >= a and len(E) - len(Xs & set(E)) >= a
               for E, a in zip(H.h1, H.alpha)):
            count += 1
    return count


def count_partitions_bruteforce(H: CoverHypergraph, i: int) -> int:
    """Oracle over all subsets of W."""
    count = 0
    for X in itertools.combinations(range(H.ground), i):
        Xs = set(X)
        if not all(len(Xs & set(e)) == 1 for e in H.h2):
            continue
        if all(len(Xs & set(E)) >= a and len(E) - len(Xs & set(E)) >= a
               for E, a in zip(H.h1, H.alpha)):
            count += 1
    return count


def verify_hyplemma(H: CoverHypergraph) -> V.Verdict:
    """t * N_l >= (t + 1) * N_{l+1} for the given alpha."""
    t = H.t
    if t == 0:
        raise ValueError("the lemma needs t >= 1 (|S| >= 2)")
    nl, nl1 = count_partitions(H, H.l), count_partitions(H, H.l + 1)
    if t * nl < (t + 1) * nl1:
        return V.violated("hyplemma", {"N_l": nl, "N_l+1": nl1, "t": t, "alpha": H.alpha}, 1)
    return V.holds("hyplemma", 1, N_l=nl, N_l1=nl1, t=t)


def partition_count_tensor(H: CoverHypergraph) -> np.ndarray:
    """R[i, alpha_1, ..., alpha_h] = N_i for every alpha with 0 <= alpha_E <= |E|."""
    h = len(H.h1)
    owner = {x: k for k, E in enumerate(H.h1) for x in E}
    shape = (H.ground + 1,) + tuple(len(E) + 1 for E in H.h1)
    hist = np.zeros(shape, dtype=np.int64)
    for X in H.choices():
        idx = [len(X)] + [0] * h
        for x in X:
            if x in owner:
                idx[1 + owner[x]] += 1
        hist[tuple(idx)] += 1
    for k, E in enumerate(H.h1):
        L = len(E)
        M = np.zeros((L + 1, L + 1), dtype=np.int64)
        for a in range(L + 1):
            for c in range(a, L - a + 1):
                M[a, c] = 1
        hist = np.moveaxis(np.tensordot(hist, M, axes=([1 + k], [1])), -1, 1 + k)
    return hist


def verify_hyplemma_all_alpha(H: CoverHypergraph) -> V.Verdict:
    """The lemma for every alpha vector bounded by the edge sizes."""
    t = H.t
    if t == 0:
        raise ValueError("the lemma needs t >= 1 (|S| >= 2)")
    R = partition_count_tensor(H)
    lhs, rhs = t * R[H.l], (t + 1) * R[H.l + 1]
    bad = np.argwhere(lhs < rhs)
    if len(bad):
        alpha = tuple(int(x) for x in bad[0])
        return V.violated("hyplemma", {"alpha": alpha, "N_l": int(R[(H.l,) + alpha]),
                                       "N_l+1": int(R[(H.l + 1,) + alpha]), "t": t}, lhs.size)
    return V.holds("hyplemma", lhs.size)


# -- G-maps and matchings --------------------------------------------------------

class BipartiteSystem:
    """Bipartite graph between V = 0..nv-1 and K = 0..nk-1 with per-target windows."""

    def __init__(self, nv: int, nk: int, edges: Iterable[Sequence[int]],
                 lower: Sequence[int] | None = None, upper: Sequence[int] | None = None):
        self.nv, self.nk = int(nv), int(nk)
        self.edges = tuple(sorted({(int(v), int(j)) for v, j in edges}))
        for v, j in self.edges:
            if not (0 <= v < self.nv and 0 <= j < self.nk):
                raise DimensionError(f"edge {(v, j)} out of range")
        self.lower = tuple(lower) if lower is not None else (0,) * self.nk
        self.upper = tuple(upper) if upper is not None else (self.nv,) * self.nk
        if len(self.lower) != self.nk or len(self.upper) != self.nk:
            raise DimensionError("one bound per target")
        if any(not 0 <= lo <= up for lo, up in zip(self.lower, self.upper)):
            raise ValueError("bounds must satisfy 0 <= l_j <= u_j")

    def neighbours(self, v: int) -> list:
        return [j for (w, j) in self.edges if w == v]

    def to_dict(self) -> dict:
        return {"left": self.nv, "right": self.nk, "edges": [list(e) for e in self.edges],
                "lower": list(self.lower), "upper": list(self.upper)}

    @classmethod
    def from_dict(cls, data) -> "BipartiteSystem":
        return cls(data["left"], data["right"], data["edges"], data.get("lower"), data.get("upper"))

    def __repr__(self):
        return (f"BipartiteSystem({self.nv}, {self.nk}, {list(self.edges)}, "
                f"lower={self.lower}, upper={self.upper})")


def count_gmaps(B: BipartiteSystem, max_states: int = 10 ** 6) -> list:
    """(s_0, ..., s_|V|): valid G-maps by domain size, via a DP over V."""
    states = {((0,) * B.nk, 0): 1}
    for v in range(B.nv):
        new = defaultdict(int)
        nbrs = B.neighbours(v)
        for (counts, k), w in states.items():
            new[counts, k] += w
            for j in nbrs:
                if counts[j] < B.upper[j]:
                    c = list(counts)
                    c[j] += 1
                    new[tuple(c), k + 1] += w
        states = new
        if len(states) > max_states:
            raise CapExceededError(f"G-map DP exceeds {max_states} states")
    s = [0] * (B.nv + 1)
    for (counts, k), w in states.items():
        if all(c >= lo for c, lo in zip(counts, B.lower)):
            s[k] += w
    return s


def count_gmaps_bruteforce(B: BipartiteSystem, cap: int = 10 ** 7) -> list:
    options = [[None] + B.neighbours(v) for v in range(B.nv)]
    size = 1
    for o in options:
        size *= len(o)
    if size > cap:
        raise CapExceededError(f"{size} maps exceeds cap {cap}")
    s = [0] * (B.nv + 1)
    for f in itertools.product(*options):
        counts = [0] * B.nk
        for j in f:
            if j is not None:
                counts[j] += 1
        if all(lo <= c <= up for c, lo, up in zip(counts, B.lower, B.upper)):
            s[sum(1 for j in f if j is not None)] += 1
    return s


def _graph_edges(G):
    """(n, edge list) from a networkx graph, a Multigraph, or an (n, edges) pair."""
    if isinstance(G, Multigraph):
        return G.n, list(G.edges)
    if hasattr(G, "nodes") and hasattr(G, "edges"):
        nodes = sorted(G.nodes())
        idx = {x: i for i, x in enumerate(nodes)}
        return len(nodes), [(idx[u], idx[v]) for u, v in G.edges()]
    n, edges = G
    return int(n), [tuple(e) for e in edges]


def count_matchings(G) -> list:
    """(Phi_0, ..., Phi_nu): number of matchings of each size (loops ignored)."""
    n, edges = _graph_edges(G)
    adj = defaultdict(list)
    for u, v in edges:
        if u != v:
            adj[u].append(v)
            adj[v].append(u)

    @lru_cache(maxsize=None)
    def poly(mask):
        if mask == 0:
            return (1,)
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        out = list(poly(rest))
        for w in adj[v]:
            if rest >> w & 1:
                sub = poly(rest & ~(1 << w))
                if len(out) < len(sub) + 1:
                    out += [0] * (len(sub) + 1 - len(out))
                for k, c in enumerate(sub):
                    out[k + 1] += c
        return tuple(out)

    phi = list(poly((1 << n) - 1))
    while len(phi) > 1 and phi[-1] == 0:
        phi.pop()
    return phi


def count_matchings_bruteforce(G) -> list:
    n, edges = _graph_edges(G)
    edges = [e for e in edges if e[0] != e[1]]
    phi = [0] * (n // 2 + 1)
    for r in range(n // 2 + 1):
        for sub in itertools.combinations(range(len(edges)), r):
            ends = [x for i in sub for x in edges[i]]
            if len(ends) == len(set(ends)):
                phi[r] += 1
    while len(phi) > 1 and phi[-1] == 0:
        phi.pop()
    return phi


def gmap_ulc(B: BipartiteSystem) -> V.Verdict:
    s = count_gmaps(B)
    v = check_ulc(s, B.nv)
    v.info["sequence"] = s
    return v


def matching_ulc(G) -> V.Verdict:
    phi = count_matchings(G)
    v = check_ulc(phi, len(phi) - 1)
    v.info["sequence"] = phi
    return v
