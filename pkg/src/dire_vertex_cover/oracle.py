"""
Exact reference solvers used to check the seed-loop solver.

Two independent minimum vertex cover oracles (branch-and-bound and exhaustive) plus an
exhaustive maximum matching that checks the blossom routine.
"""

from __future__ import annotations

import logging
from itertools import combinations

from dire_vertex_cover.config_loader import get_parameter
from dire_vertex_cover.graph import Graph, VertexId
from dire_vertex_cover.matching import blossom_mate, greedy_matching
from dire_vertex_cover.solver import CoverResult

logger = logging.getLogger(__name__)


class OracleLimitError(ValueError):
    """Instance exceeds the configured size limit of an exact solver."""


def _check_limit(actual: int, section_key: str, limit: int | None, what: str) -> int:
    if limit is None:
        limit = int(get_parameter("oracle", section_key))
    if actual > limit:
        raise OracleLimitError(f"{what} {actual} exceeds the oracle limit of {limit}")
    return limit


def _matching_size(adjacency: dict[VertexId, set[VertexId]]) -> int:
    """Maximum matching size of the residual graph, via the same blossom routine."""
    order = sorted(adjacency)
    index = {v: i for i, v in enumerate(order)}
    compact = [sorted(index[w] for w in adjacency[v]) for v in order]
    mate = blossom_mate(compact)
    return sum(1 for v, w in enumerate(mate) if w > v)


def _without(
    adjacency: dict[VertexId, set[VertexId]], dropped: list[VertexId]
) -> dict[VertexId, set[VertexId]]:
    gone = set(dropped)
    residual = {}
    for v, neighbours in adjacency.items():
        if v in gone:
            continue
        kept = neighbours - gone
        if kept:
            residual[v] = kept
    return residual


def exact_mvc(g: Graph, limit: int | None = None) -> CoverResult:
    """
    Minimum vertex cover by branch-and-bound.

    Branches on a maximum-degree vertex (smallest id on ties): either it joins the cover or
    all of its neighbours do. A branch is pruned when its size plus the maximum matching of
    the residual graph cannot beat the incumbent, which starts as the endpoint set of a greedy
    maximal matching.

    Raises:
        OracleLimitError: if g has more vertices than `limit` (default oracle.bnb_max_vertices)
    """
    _check_limit(g.m, "bnb_max_vertices", limit, "Vertex count")

    mate = greedy_matching(g.adjacency)
    best = [v for v in range(g.m) if mate[v] != -1]
    lower_bound = sum(1 for v, w in enumerate(blossom_mate(g.adjacency)) if w > v)

    def branch(adjacency: dict[VertexId, set[VertexId]], chosen: list[VertexId]) -> None:
        nonlocal best
        if not adjacency:
            if len(chosen) < len(best):
                best = sorted(chosen)
            return
        if len(chosen) + _matching_size(adjacency) >= len(best):
            return
        pivot = min(adjacency, key=lambda v: (-len(adjacency[v]), v))
        branch(_without(adjacency, [pivot]), chosen + [pivot])
        neighbours = sorted(adjacency[pivot])
        branch(_without(adjacency, neighbours), chosen + neighbours)

    start = {v: set(g.adjacency[v]) for v in range(g.m) if g.adjacency[v]}
    if len(best) > lower_bound:
        branch(start, [])

    cover = tuple(sorted(best))
    logger.debug("Exact cover of size %d, matching bound %d", len(cover), lower_bound)
    return CoverResult(
        cover=cover,
        size=len(cover),
        seed=None,
        matching_lower_bound=lower_bound,
        verified_cover=True,
        optimal_certified=len(cover) == lower_bound,
    )


def exact_mvc_exhaustive(g: Graph, limit: int | None = None) -> int:
    """Minimum cover size by trying every vertex subset in order of size."""
    _check_limit(g.m, "exhaustive_max_vertices", limit, "Vertex count")
    edge_masks = [(1 << u) | (1 << v) for u, v in g.edges]
    for size in range(g.m + 1):
        for subset in combinations(range(g.m), size):
            mask = 0
            for v in subset:
                mask |= 1 << v
            if all(mask & edge for edge in edge_masks):
                return size
    return g.m


def exact_max_matching_exhaustive(g: Graph, limit: int | None = None) -> int:
    """Maximum matching size by backtracking over the sorted edge list."""
    _check_limit(g.n, "matching_max_edges", limit, "Edge count")
    edges = g.sorted_edges()
    used = [False] * g.m
    best = 0

    def extend(i: int, size: int) -> None:
        nonlocal best
        if size > best:
            best = size
        if i == len(edges) or size + (len(edges) - i) <= best:
            return
        u, v = edges[i]
        if not used[u] and not used[v]:
            used[u] = used[v] = True
            extend(i + 1, size + 1)
            used[u] = used[v] = False
        extend(i + 1, size)

    extend(0, 0)
    return best
