"""
Maximum matching by Edmonds' blossom method.

The scan order is fixed so results are reproducible: a greedy pass matches each vertex
(ascending) to its first free neighbour (ascending), then one augmenting-path search is
run from every vertex still exposed, again in ascending order.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from dire_vertex_cover.graph import Graph, VertexId

Edge = tuple[VertexId, VertexId]


def _ordered(u: VertexId, v: VertexId) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Matching:
    """A set of pairwise vertex-disjoint edges, each stored as (smaller, larger)."""

    edges: frozenset[Edge]

    def __post_init__(self):
        seen: set[VertexId] = set()
        for u, v in self.edges:
            if u >= v:
                raise ValueError(f"Matching edge ({u}, {v}) must be stored as (smaller, larger)")
            if u in seen or v in seen:
                raise ValueError(f"Vertex shared by two matching edges at ({u}, {v})")
            seen.update((u, v))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Edge]) -> Matching:
        return cls(frozenset(_ordered(u, v) for u, v in pairs))

    @cached_property
    def matched_with(self) -> dict[VertexId, VertexId]:
        partner: dict[VertexId, VertexId] = {}
        for u, v in self.edges:
            partner[u] = v
            partner[v] = u
        return partner

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(sorted(self.edges))

    def __contains__(self, edge: object) -> bool:
        if not isinstance(edge, tuple) or len(edge) != 2:
            return False
        return _ordered(*edge) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


def greedy_matching(adjacency: Sequence[Sequence[VertexId]]) -> list[VertexId]:
    """Maximal matching as a mate array (-1 = exposed).

    Each vertex takes its first free neighbour.
    """
    mate = [-1] * len(adjacency)
    for v, neighbours in enumerate(adjacency):
        if mate[v] != -1:
            continue
        for w in neighbours:
            if mate[w] == -1:
                mate[v] = w
                mate[w] = v
                break
    return mate


class _BlossomSearch:
    """Augmenting-path search with blossom contraction over a mate array."""

    def __init__(self, adjacency: Sequence[Sequence[VertexId]], mate: list[VertexId]):
        self.adjacency = adjacency
        self.mate = mate
        self.size = len(adjacency)

    def _lowest_common_base(self, a: VertexId, b: VertexId) -> VertexId:
        on_path = [False] * self.size
        while True:
            a = self.base[a]
            on_path[a] = True
            if self.mate[a] == -1:
                break
            a = self.parent[self.mate[a]]
        while True:
            b = self.base[b]
            if on_path[b]:
                return b
            b = self.parent[self.mate[b]]

    def _mark_path(self, v: VertexId, blossom_base: VertexId, child: VertexId) -> None:
        while self.base[v] != blossom_base:
            self.in_blossom[self.base[v]] = True
            self.in_blossom[self.base[self.mate[v]]] = True
            self.parent[v] = child
            child = self.mate[v]
            v = self.parent[self.mate[v]]

    def find_path(self, root: VertexId) -> VertexId:
        """Return the exposed endpoint of an augmenting path from `root`, or -1."""
        self.used = [False] * self.size
        self.parent = [-1] * self.size
        self.base = list(range(self.size))
        self.used[root] = True
        queue = deque([root])

        while queue:
            v = queue.popleft()
            for to in self.adjacency[v]:
                if self.base[v] == self.base[to] or self.mate[v] == to:
                    continue
                if to == root or (self.mate[to] != -1 and self.parent[self.mate[to]] != -1):
                    # odd cycle: contract it into its base
                    blossom_base = self._lowest_common_base(v, to)
                    self.in_blossom = [False] * self.size
                    self._mark_path(v, blossom_base, to)
                    self._mark_path(to, blossom_base, v)
                    for i in range(self.size):
                        if self.in_blossom[self.base[i]]:
                            self.base[i] = blossom_base
                            if not self.used[i]:
                                self.used[i] = True
                                queue.append(i)
                elif self.parent[to] == -1:
                    self.parent[to] = v
                    if self.mate[to] == -1:
                        return to
                    self.used[self.mate[to]] = True
                    queue.append(self.mate[to])
        return -1

    def augment(self, end: VertexId) -> None:
        v = end
        while v != -1:
            previous = self.parent[v]
            next_v = self.mate[previous]
            self.mate[v] = previous
            self.mate[previous] = v
            v = next_v


def blossom_mate(adjacency: Sequence[Sequence[VertexId]]) -> list[VertexId]:
    """Maximum matching of an adjacency-list graph as a mate array (-1 = exposed)."""
    mate = greedy_matching(adjacency)
    search = _BlossomSearch(adjacency, mate)
    for root in range(len(adjacency)):
        if mate[root] != -1:
            continue
        end = search.find_path(root)
        if end != -1:
            search.augment(end)
    return mate


def _mate_to_matching(mate: Sequence[VertexId]) -> Matching:
    return Matching(frozenset((v, w) for v, w in enumerate(mate) if v < w))


def maximum_matching(g: Graph) -> Matching:
    """
    Maximum-cardinality matching of `g`.

    Works on disconnected graphs. The result is deterministic for a given Graph.
    """
    return _mate_to_matching(blossom_mate(g.adjacency))


def perturbed_maximum_matching(g: Graph, perturbation_id: int = 0) -> Matching:
    """
    Maximum matching found after relabelling vertices by a seeded permutation.

    Perturbation 0 is the identity and equals `maximum_matching(g)`. Other ids draw the
    permutation from `np.random.default_rng(perturbation_id)`, which steers the blossom
    scan towards a possibly different maximum matching of the same size.
    """
    if perturbation_id < 0:
        raise ValueError(f"perturbation_id must be non-negative, got {perturbation_id}")
    if perturbation_id == 0:
        return maximum_matching(g)

    rng = np.random.default_rng(perturbation_id)
    relabel = [int(x) for x in rng.permutation(g.m)]
    original = [0] * g.m
    for v, label in enumerate(relabel):
        original[label] = v

    relabelled = [
        sorted(relabel[w] for w in g.adjacency[original[label]]) for label in range(g.m)
    ]
    mate = blossom_mate(relabelled)
    return Matching.from_pairs(
        (original[a], original[b]) for a, b in enumerate(mate) if b != -1 and a < b
    )


def is_matching(g: Graph, edges: Iterable[Edge]) -> bool:
    """True iff every edge exists in `g` and no two edges share a vertex."""
    seen: set[VertexId] = set()
    for u, v in edges:
        if u == v or not g.has_edge(u, v) or u in seen or v in seen:
            return False
        seen.update((u, v))
    return True
