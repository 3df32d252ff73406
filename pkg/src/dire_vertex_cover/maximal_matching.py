"""
Guided maximal matching and the represents table.

Levels are processed in BFS order. Inside a level, edges are chosen by tier:
T1 same level and in the maximum matching, T2 same level otherwise,
T3 into the next level and in the maximum matching, T4 into the next level otherwise.
Every chosen edge becomes a row recording which neighbours each endpoint still had.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Literal

from dire_vertex_cover.graph import BfsLevels, Graph, VertexId
from dire_vertex_cover.matching import Matching, is_matching

logger = logging.getLogger(__name__)

SelectionMode = Literal["tier-first", "vertex-first"]
SELECTION_MODES: tuple[SelectionMode, ...] = ("tier-first", "vertex-first")

EventSink = Callable[[str, dict[str, Any]], None]


class LevelInvariantError(RuntimeError):
    """An edge reaches back to an already processed level."""


class EndpointStatus(Enum):
    ACTIVE = "active"
    FROZEN = "frozen"
    REMOVED = "removed"


@dataclass
class RepresentsRow:
    """One selected edge and the neighbours each endpoint represented when it was selected."""

    node1: VertexId
    node2: VertexId
    list1: list[VertexId]
    list2: list[VertexId]
    status1: EndpointStatus = EndpointStatus.ACTIVE
    status2: EndpointStatus = EndpointStatus.ACTIVE

    def _side(self, v: VertexId) -> int:
        if v == self.node1:
            return 1
        if v == self.node2:
            return 2
        raise ValueError(f"Vertex {v} is not an endpoint of row ({self.node1}, {self.node2})")

    def partner(self, v: VertexId) -> VertexId:
        return self.node2 if self._side(v) == 1 else self.node1

    def represents(self, v: VertexId) -> list[VertexId]:
        return self.list1 if self._side(v) == 1 else self.list2

    def status(self, v: VertexId) -> EndpointStatus:
        return self.status1 if self._side(v) == 1 else self.status2

    def set_status(self, v: VertexId, status: EndpointStatus) -> None:
        if self._side(v) == 1:
            self.status1 = status
        else:
            self.status2 = status


@dataclass
class RepresentsTable:
    """
    Rows of the guided maximal matching plus the local-minimization state.

    `cover` is S (frozen endpoints in freeze order) and `removed` keeps removal order.
    """

    graph: Graph
    rows: list[RepresentsRow] = field(default_factory=list)
    cover: list[VertexId] = field(default_factory=list)
    removed: list[VertexId] = field(default_factory=list)
    endpoint_row: dict[VertexId, int] = field(default_factory=dict)
    on_event: EventSink | None = None

    @property
    def endpoints(self) -> frozenset[VertexId]:
        """The endpoint set P."""
        return frozenset(self.endpoint_row)

    def append_row(
        self, node1: VertexId, node2: VertexId, list1: list[VertexId], list2: list[VertexId]
    ) -> int:
        if node1 in self.endpoint_row or node2 in self.endpoint_row:
            raise ValueError(f"Edge ({node1}, {node2}) reuses an endpoint already in the table")
        index = len(self.rows)
        self.rows.append(RepresentsRow(node1, node2, list(list1), list(list2)))
        self.endpoint_row[node1] = index
        self.endpoint_row[node2] = index
        return index

    def row_of(self, v: VertexId) -> RepresentsRow:
        return self.rows[self.endpoint_row[v]]

    def status(self, v: VertexId) -> EndpointStatus:
        return self.row_of(v).status(v)

    def represents(self, v: VertexId) -> list[VertexId]:
        return self.row_of(v).represents(v)

    def endpoints_in_order(self) -> Iterator[VertexId]:
        """Endpoints in table order: rows top-down, node1 before node2."""
        for row in self.rows:
            yield row.node1
            yield row.node2

    def active_endpoints(self) -> list[VertexId]:
        return [v for v in self.endpoints_in_order() if self.status(v) is EndpointStatus.ACTIVE]

    def emit(self, kind: str, **payload: Any) -> None:
        if self.on_event is not None:
            self.on_event(kind, payload)

    def to_json(self) -> list[dict[str, Any]]:
        names = self.graph.names
        return [
            {
                "node1": names[row.node1],
                "list1": [names[v] for v in row.list1],
                "node2": names[row.node2],
                "list2": [names[v] for v in row.list2],
            }
            for row in self.rows
        ]


def _check_levels(g: Graph, levels: BfsLevels) -> None:
    if len(levels.level_of) != g.m or sum(len(level) for level in levels.levels) != g.m:
        raise ValueError("BFS levels do not cover the vertex set of the graph")
    for depth, level in enumerate(levels.levels):
        if any(levels.level_of[v] != depth for v in level):
            raise ValueError(f"BFS level {depth} disagrees with level_of")
    for u, v in g.edges:
        if abs(levels.level_of[u] - levels.level_of[v]) > 1:
            raise ValueError(f"Edge ({u}, {v}) spans more than one BFS level")


def _classify(
    a: VertexId, b: VertexId, depth: int, level_of: tuple[int, ...], em: Matching
) -> tuple[int, tuple[VertexId, VertexId]]:
    """Tier number and selection key of working edge (a, b) seen from level vertex a."""
    if level_of[b] == depth:
        key = (a, b) if a < b else (b, a)
        return (1 if key in em else 2), key
    if level_of[b] == depth + 1:
        return (3 if (a, b) in em else 4), (a, b)
    raise LevelInvariantError(
        f"Working edge ({a}, {b}) leaves level {depth} for level {level_of[b]}"
    )


def guided_maximal_matching(
    g: Graph,
    em: Matching,
    levels: BfsLevels,
    mode: SelectionMode = "tier-first",
    on_event: EventSink | None = None,
) -> RepresentsTable:
    """
    Build the represents table by level-guided edge selection.

    Args:
        g: Connected simple graph
        em: Maximum matching of g (the priority signal)
        levels: BFS levels of g
        mode: 'tier-first' ranks every candidate edge of the level by tier then key;
            'vertex-first' restricts candidates to the smallest unvisited vertex of the level
        on_event: Optional sink receiving 'edge_selected' and 'row_appended' events

    Returns:
        RepresentsTable with all statuses active
    """
    if mode not in SELECTION_MODES:
        raise ValueError(f"Unknown selection mode: {mode}")
    if not is_matching(g, em.edges):
        raise ValueError("em is not a matching of the graph")
    _check_levels(g, levels)

    names = g.names
    level_of = levels.level_of
    remaining = [set(adj) for adj in g.adjacency]
    visited = [not adj for adj in remaining]
    table = RepresentsTable(graph=g, on_event=on_event)

    for depth, level in enumerate(levels.levels):
        while True:
            unvisited = [v for v in level if not visited[v]]
            if not unvisited:
                break
            scan = level if mode == "tier-first" else unvisited[:1]
            best: tuple[int, tuple[VertexId, VertexId]] | None = None
            for a in scan:
                for b in remaining[a]:
                    candidate = _classify(a, b, depth, level_of, em)
                    if best is None or candidate < best:
                        best = candidate
            if best is None:
                raise LevelInvariantError(
                    f"Unvisited vertex {unvisited[0]} at level {depth} has no selectable edge"
                )

            tier, (a, b) = best
            table.emit("edge_selected", edge=[names[a], names[b]], tier=f"T{tier}", level=depth)
            list1, list2 = sorted(remaining[a]), sorted(remaining[b])
            row = table.append_row(a, b, list1, list2)
            table.emit(
                "row_appended",
                row=row,
                node1=names[a],
                list1=[names[v] for v in list1],
                node2=names[b],
                list2=[names[v] for v in list2],
            )
            logger.debug(
                "Level %d: selected (%s, %s) from tier T%d", depth, names[a], names[b], tier
            )

            visited[a] = visited[b] = True
            touched = remaining[a] | remaining[b]
            for x in (a, b):
                for w in remaining[x]:
                    remaining[w].discard(x)
                remaining[x].clear()
            for w in touched:
                if not remaining[w]:
                    visited[w] = True

        leftover = [v for v in level if remaining[v]]
        if leftover:
            raise LevelInvariantError(f"Level {depth} still has working edges at {leftover}")

    return table


def matched_edges(table: RepresentsTable) -> Matching:
    """The maximal matching encoded by the table rows."""
    return Matching.from_pairs((row.node1, row.node2) for row in table.rows)
