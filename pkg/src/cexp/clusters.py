"""Cluster multisets, connectivity, enumeration, and partitions into
connected subclusters.

A cluster is a multiset of term indices.  Its cluster graph (one vertex per
multiplicity unit, copies of a term mutually adjacent) is connected exactly
when the distinct terms induce a connected subgraph of the interaction
graph, so enumeration works on connected vertex sets plus compositions of
the remaining multiplicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as _iproduct
from typing import Iterable, Mapping, Sequence

from .errors import DisconnectedCluster, NotAPartition, SizeCap, SizeZero
from .graphs import InteractionGraph, SimpleGraph

PARTITION_SIZE_CAP = 14


@dataclass(frozen=True, order=True)
class Cluster:
    """Multiset of term indices in canonical form: sorted (index, multiplicity)."""

    items: tuple[tuple[int, int], ...]

    def __post_init__(self):
        items = tuple((int(i), int(m)) for i, m in self.items)
        object.__setattr__(self, "items", items)
        if not items:
            raise SizeZero("clusters are nonempty multisets")
        idxs = [i for i, _ in items]
        if idxs != sorted(set(idxs)):
            raise NotAPartition(f"canonical form requires strictly increasing indices, got {idxs}")
        if any(m < 1 for _, m in items):
            raise SizeZero("multiplicities must be >= 1")

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> "Cluster":
        return cls(tuple(sorted((i, m) for i, m in counts.items() if m > 0)))

    @property
    def size(self) -> int:
        return sum(m for _, m in self.items)

    @property
    def distinct(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.items)

    def multiplicity(self, index: int) -> int:
        for i, m in self.items:
            if i == index:
                return m
        return 0

    def counts(self) -> dict[int, int]:
        return dict(self.items)

    def factorial(self) -> int:
        """W! = product of multiplicity factorials."""
        out = 1
        for _, m in self.items:
            out *= math.factorial(m)
        return out

    def units(self) -> tuple[int, ...]:
        """Term index of every multiplicity unit, sorted."""
        out: list[int] = []
        for i, m in self.items:
            out.extend([i] * m)
        return tuple(out)

    def coefficient_power(self, coefficients: Sequence[float]) -> float:
        """lambda^W = prod lambda_X^mu(X)."""
        out = 1.0
        for i, m in self.items:
            out *= coefficients[i] ** m
        return out

    def union(self, other: "Cluster") -> "Cluster":
        counts = self.counts()
        for i, m in other.items:
            counts[i] = counts.get(i, 0) + m
        return Cluster.from_counts(counts)


@dataclass(frozen=True, order=True)
class Partition:
    """Multiset of connected subclusters of a parent cluster.

    `parts` is the canonical (cluster, multiplicity) list; `graph` is the
    partition graph: one vertex per part copy, edges between overlapping
    parts, multi-edges reduced.
    """

    parts: tuple[tuple[Cluster, int], ...]
    graph: SimpleGraph

    @property
    def size(self) -> int:
        return sum(m for _, m in self.parts)

    def factorial(self) -> int:
        """P! = product over distinct parts of multiplicity factorials."""
        out = 1
        for _, m in self.parts:
            out *= math.factorial(m)
        return out

    def part_list(self) -> tuple[Cluster, ...]:
        out: list[Cluster] = []
        for part, m in self.parts:
            out.extend([part] * m)
        return tuple(out)


def cluster_support(cluster: Cluster, g: InteractionGraph) -> frozenset:
    out: frozenset = frozenset()
    for i in cluster.distinct:
        out |= g.supports[i]
    return out


def cluster_graph(cluster: Cluster, g: InteractionGraph) -> SimpleGraph:
    """Graph on multiplicity units; copies of a term are mutually adjacent."""
    units = cluster.units()
    m = len(units)
    edges = []
    for a in range(m):
        for b in range(a + 1, m):
            if units[a] == units[b] or g.supports[units[a]] & g.supports[units[b]]:
                edges.append((a, b))
    return SimpleGraph(m, tuple(edges))


def is_connected_cluster(cluster: Cluster, g: InteractionGraph) -> bool:
    distinct = cluster.distinct
    if len(distinct) == 1:
        return True
    members = set(distinct)
    seen = {distinct[0]}
    stack = [distinct[0]]
    while stack:
        x = stack.pop()
        for y in g.neighbors[x]:
            if y in members and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(members)


def _connected_vertex_sets(g: InteractionGraph, roots: Iterable[int], max_size: int) -> list[set]:
    """All vertex sets of size <= max_size containing some root and inducing
    a connected subgraph; grown breadth-first with deduplication."""
    level = {frozenset((r,)) for r in roots}
    out = [set(s) for s in sorted(level, key=sorted)]
    for _ in range(max_size - 1):
        nxt = set()
        for s in level:
            for v in s:
                for u in g.neighbors[v]:
                    if u not in s:
                        nxt.add(s | {u})
        out.extend(set(s) for s in sorted(nxt, key=sorted))
        level = nxt
        if not level:
            break
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _clusters_on_vertex_set(vertices: Sequence[int], size: int) -> list[Cluster]:
    vs = sorted(vertices)
    if len(vs) > size:
        return []
    out = []
    for comp in _compositions(size, len(vs)):
        out.append(Cluster(tuple(zip(vs, comp))))
    return out


def enumerate_connected_clusters(g: InteractionGraph, root: int, size: int) -> list[Cluster]:
    """All connected clusters of the given size whose multiset contains `root`."""
    if size < 1:
        raise SizeZero("cluster size must be >= 1")
    out: list[Cluster] = []
    for vs in _connected_vertex_sets(g, [root], size):
        if root in vs:
            out.extend(_clusters_on_vertex_set(sorted(vs), size))
    out.sort()
    return out


def enumerate_all_connected_clusters(g: InteractionGraph, size: int) -> list[Cluster]:
    """Union over all roots, without duplicates (each cluster listed once)."""
    if size < 1:
        raise SizeZero("cluster size must be >= 1")
    out: list[Cluster] = []
    for vs in _connected_vertex_sets(g, range(len(g.supports)), size):
        out.extend(_clusters_on_vertex_set(sorted(vs), size))
    out.sort()
    return out


def enumerate_clusters_connected_to_A(g: InteractionGraph, supp_a_index: int, size: int) -> list[Cluster]:
    """All clusters of `size` completely connected to the observable.

    Realized exactly as specified for the augmented term set: enumerate the
    connected clusters of size+1 containing the observable's term, reduce
    that term's multiplicity by one, and deduplicate.
    """
    if size < 1:
        raise SizeZero("cluster size must be >= 1")
    seen = set()
    out = []
    for parent in enumerate_connected_clusters(g, supp_a_index, size + 1):
        counts = parent.counts()
        counts[supp_a_index] -= 1
        reduced = Cluster.from_counts(counts)
        if reduced.items not in seen:
            seen.add(reduced.items)
            out.append(reduced)
    out.sort()
    return out


def _connected_subclusters_with_anchor(cluster: Cluster, anchor: int, g: InteractionGraph) -> list[Cluster]:
    counts = cluster.counts()
    sub = InteractionGraphView(g, set(counts))
    out = []
    for vs in _connected_vertex_sets(sub, [anchor], len(counts)):
        vs_sorted = sorted(vs)
        ranges = [range(1, counts[v] + 1) for v in vs_sorted]
        for mult in _iproduct(*ranges):
            out.append(Cluster(tuple(zip(vs_sorted, mult))))
    return out


class InteractionGraphView:
    """Adjacency of an interaction graph restricted to a vertex subset."""

    def __init__(self, g: InteractionGraph, keep: set):
        self.supports = g.supports
        self.neighbors = tuple(
            tuple(u for u in g.neighbors[v] if u in keep) if v in keep else ()
            for v in range(len(g.neighbors))
        )


def enumerate_connected_partitions(
    cluster: Cluster, g: InteractionGraph, *, size_cap: int = PARTITION_SIZE_CAP
) -> list[Partition]:
    """All partitions of a connected cluster into connected subclusters.

    Parts are grown anchored at the smallest remaining term index; the raw
    sweep produces duplicates, which are removed via the canonical form.
    """
    if cluster.size > size_cap:
        raise SizeCap(f"partition enumeration capped at size {size_cap}, got {cluster.size}")
    if not is_connected_cluster(cluster, g):
        raise DisconnectedCluster(f"cluster {cluster.items} is not connected")

    def rec(remaining: Cluster | None) -> set[tuple]:
        if remaining is None:
            return {()}
        anchor = remaining.distinct[0]
        results = set()
        for part in _connected_subclusters_with_anchor(remaining, anchor, g):
            rest_counts = remaining.counts()
            for i, m in part.items:
                rest_counts[i] -= m
            rest_counts = {i: m for i, m in rest_counts.items() if m > 0}
            rest = Cluster.from_counts(rest_counts) if rest_counts else None
            for tail in rec(rest):
                results.add(tuple(sorted(tail + (part,))))
        return results

    partitions = []
    for parts in sorted(rec(cluster)):
        grouped: dict[Cluster, int] = {}
        for part in parts:
            grouped[part] = grouped.get(part, 0) + 1
        canonical = tuple(sorted(grouped.items()))
        partitions.append(Partition(canonical, _partition_graph(parts, g)))
    return partitions


def _partition_graph(parts: Sequence[Cluster], g: InteractionGraph) -> SimpleGraph:
    sups = [cluster_support(p, g) for p in parts]
    edges = []
    for a in range(len(parts)):
        for b in range(a + 1, len(parts)):
            if sups[a] & sups[b]:
                edges.append((a, b))
    return SimpleGraph(len(parts), tuple(edges))


def partition_factors(cluster: Cluster, partition: Partition) -> dict[str, int]:
    """Exact integers W!, P!, and N_P(W) = W!/(P! * prod V!)."""
    union: dict[int, int] = {}
    denom = partition.factorial()
    for part, mult in partition.parts:
        for i, m in part.items:
            union[i] = union.get(i, 0) + m * mult
        denom *= part.factorial() ** mult
    if union != cluster.counts():
        raise NotAPartition("parts do not recombine to the parent cluster")
    w_fact = cluster.factorial()
    if w_fact % denom:
        raise NotAPartition("N_P(W) failed to come out integral")
    return {"W!": w_fact, "P!": partition.factorial(), "N_P": w_fact // denom}
