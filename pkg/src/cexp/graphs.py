"""Interaction, cluster, and partition graphs, plus the Tutte-polynomial
evaluations and coloring/spanning-tree oracles used by the log-echo formula
and the combinatorial property tests.

Only the two Tutte points (1,0) and (1,1) are ever needed: at x=1 bridges
contribute factor 1 and can be contracted away; at y=0 any loop kills the
branch, at y=1 loops are dropped.  The deletion-contraction recursion runs on
multigraphs (contractions create parallel edges and loops) and memoizes on a
canonical relabeling, which is sound because equal keys imply identical
relabeled edge multisets.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DisconnectedInput, GraphTooLarge, MalformedSpec

TUTTE_VERTEX_CAP = 24
COLORING_VERTEX_CAP = 8


@dataclass(frozen=True)
class SimpleGraph:
    """Simple undirected graph: vertex count plus a sorted (u < v) edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        if self.n < 0:
            raise MalformedSpec("negative vertex count")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise MalformedSpec(f"bad edge ({u}, {v}) for n={self.n}")
            if (u, v) in seen:
                raise MalformedSpec(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n


def max_degree(g: SimpleGraph) -> int:
    deg = [0] * g.n
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    return max(deg) if deg else 0


@dataclass(frozen=True, eq=False)
class InteractionGraph:
    """Graph over Hamiltonian terms; edge iff the supports overlap."""

    graph: SimpleGraph
    supports: tuple[frozenset, ...]
    neighbors: tuple[tuple[int, ...], ...]
    max_degree: int


def interaction_graph_from_supports(supports: Sequence[Iterable[int]]) -> InteractionGraph:
    sups = tuple(frozenset(s) for s in supports)
    edges = []
    for i in range(len(sups)):
        for j in range(i + 1, len(sups)):
            if sups[i] & sups[j]:
                edges.append((i, j))
    graph = SimpleGraph(len(sups), tuple(edges))
    adj = graph.adjacency()
    neighbors = tuple(tuple(sorted(a)) for a in adj)
    deg = max((len(a) for a in adj), default=0)
    return InteractionGraph(graph, sups, neighbors, deg)


def build_interaction_graph(hamiltonian) -> InteractionGraph:
    """Interaction graph of a LocalHamiltonian (vertices = terms)."""
    return interaction_graph_from_supports([t.support for t in hamiltonian.terms])


# ---------------------------------------------------------------------------
# multigraph deletion-contraction for T(1,0) and T(1,1)

_TUTTE_MEMO: dict[int, dict] = {0: {}, 1: {}}


def _canon_key(n: int, edges: tuple[tuple[int, int, int], ...]) -> tuple:
    """Relabel by a degree-refined order and encode the exact edge multiset.

    Not a complete isomorphism canonization; collisions are impossible
    (equal keys are identical labeled multigraphs), misses only cost a
    recomputation.
    """
    deg = [0] * n
    loops = [0] * n
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for a, b, m in edges:
        if a == b:
            loops[a] += m
            deg[a] += 2 * m
        else:
            deg[a] += m
            deg[b] += m
            adj[a].append((b, m))
            adj[b].append((a, m))
    colors = [(deg[v], loops[v]) for v in range(n)]
    for _ in range(2):
        colors = [(colors[v], tuple(sorted((colors[u], m) for u, m in adj[v]))) for v in range(n)]
    order = sorted(range(n), key=lambda v: (repr(colors[v]), v))
    relabel = {old: new for new, old in enumerate(order)}
    new_edges = []
    for a, b, m in edges:
        na, nb = relabel[a], relabel[b]
        if na > nb:
            na, nb = nb, na
        new_edges.append((na, nb, m))
    return (n, tuple(sorted(new_edges)))


def _mg_connected_without(n: int, edges, skip: tuple[int, int]) -> bool:
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b, _ in edges:
        if (a, b) == skip or a == b:
            continue
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _mg_contract(n: int, edges, a: int, b: int) -> tuple[int, tuple]:
    """Contract one copy of edge (a, b); surviving copies become loops."""

    def newv(v: int) -> int:
        v = a if v == b else v
        return v - 1 if v > b else v

    acc: dict[tuple[int, int], int] = defaultdict(int)
    for u, w, m in edges:
        if (u, w) == (a, b):
            m -= 1
            if m == 0:
                continue
        nu, nw = newv(u), newv(w)
        if nu > nw:
            nu, nw = nw, nu
        acc[(nu, nw)] += m
    return n - 1, tuple(sorted((u, w, m) for (u, w), m in acc.items()))


def _tutte_point(n: int, edges: tuple, y: int) -> int:
    key = _canon_key(n, edges)
    memo = _TUTTE_MEMO[y]
    cached = memo.get(key)
    if cached is not None:
        return cached
    n, edges = key
    loop_free = tuple(e for e in edges if e[0] != e[1])
    if len(loop_free) != len(edges):
        result = 0 if y == 0 else _tutte_point(n, loop_free, y)
        memo[key] = result
        return result
    if not edges:
        result = 1
    else:
        pick = None
        for a, b, m in edges:
            if m >= 2:
                pick = (a, b, m)
                break
        if pick is None:
            for a, b, m in edges:
                if not _mg_connected_without(n, edges, (a, b)):
                    continue  # bridge: contract later only via the all-bridge shortcut
                pick = (a, b, m)
                break
        if pick is None:
            result = 1  # only bridges left: a tree, worth x^(n-1) = 1
        else:
            a, b, m = pick
            deleted = tuple(e if e[:2] != (a, b) else (a, b, m - 1) for e in edges if e[2] > 1 or e[:2] != (a, b))
            cn, cedges = _mg_contract(n, edges, a, b)
            result = _tutte_point(n, deleted, y) + _tutte_point(cn, cedges, y)
    memo[key] = result
    return result


def tutte_T10(g: SimpleGraph, *, vertex_cap: int = TUTTE_VERTEX_CAP) -> int:
    """Exact T_g(1, 0) of a connected simple graph by deletion-contraction."""
    if g.n > vertex_cap:
        raise GraphTooLarge(f"{g.n} vertices exceeds the Tutte cap {vertex_cap}")
    if not g.is_connected():
        raise DisconnectedInput("tutte_T10 expects a connected graph")
    edges = tuple((u, v, 1) for u, v in g.edges)
    return _tutte_point(g.n, edges, 0)


def _int_det(mat: list[list[int]]) -> int:
    """Exact determinant of an integer matrix (Bareiss elimination)."""
    a = [row[:] for row in mat]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def spanning_tree_count(g: SimpleGraph, method: str = "kirchhoff") -> int:
    """Exact number of spanning trees of a connected graph.

    `kirchhoff` evaluates a Laplacian minor with exact integer arithmetic,
    `deletion-contraction` evaluates T_g(1, 1); the two must agree.
    """
    if not g.is_connected():
        raise DisconnectedInput("spanning_tree_count expects a connected graph")
    if method == "deletion-contraction":
        edges = tuple((u, v, 1) for u, v in g.edges)
        return _tutte_point(g.n, edges, 1)
    if method != "kirchhoff":
        raise MalformedSpec(f"unknown method {method!r}")
    if g.n == 1:
        return 1
    lap = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    minor = [row[1:] for row in lap[1:]]
    return _int_det(minor)


_POPCOUNT = np.array([bin(i).count("1") for i in range(512)], dtype=np.int16)


def exact_coloring_count(g: SimpleGraph, colors: int) -> int:
    """Number of proper colorings using exactly `colors` colors (brute force)."""
    if colors < 1:
        raise MalformedSpec("colors must be a positive integer")
    if g.n > COLORING_VERTEX_CAP:
        raise GraphTooLarge(f"{g.n} vertices exceeds the brute-force cap {COLORING_VERTEX_CAP}")
    if colors > g.n:
        return 0
    k = colors
    total = k**g.n
    idx = np.arange(total, dtype=np.int64)
    assign = np.empty((total, g.n), dtype=np.int8)
    for j in range(g.n):
        assign[:, j] = (idx // (k**j)) % k
    ok = np.ones(total, dtype=bool)
    for u, v in g.edges:
        ok &= assign[:, u] != assign[:, v]
    used = np.zeros(total, dtype=np.int16)
    for j in range(g.n):
        used |= (1 << assign[:, j].astype(np.int16))
    surjective = _POPCOUNT[used] == k
    return int(np.count_nonzero(ok & surjective))
