"""
Graph representation, parsing and BFS leveling.

Key conventions:
- Vertex names are interned in lexicographic order of their UTF-8 bytes, so index 0 is
  the smallest name and "10" sorts before "2"
- `RawMultigraph` is the verbatim parse result (loops and parallel edges preserved)
- `Graph` is simple: `normalize()` collapses parallel edges and replaces every loop at v
  by a fresh degree-one dummy vertex "v__loopK"
- `Graph` and `BfsLevels` are immutable and safe to share between workers
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Literal

logger = logging.getLogger(__name__)

VertexId = int
GraphFormat = Literal["edgelist", "dimacs"]
GRAPH_FORMATS: tuple[GraphFormat, ...] = ("edgelist", "dimacs")


class GraphParseError(ValueError):
    """Syntax error in an edge-list or DIMACS stream."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


def name_key(name: str) -> bytes:
    """Sort key for vertex names: raw byte-string comparison."""
    return name.encode("utf-8")


@dataclass(frozen=True)
class RawMultigraph:
    """Pre-normalization graph: names plus an edge list that may hold loops and parallels."""

    names: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        declared = set(self.names)
        if len(declared) != len(self.names):
            raise ValueError("RawMultigraph names must be unique")
        for u, v in self.edges:
            if u not in declared or v not in declared:
                raise ValueError(f"Edge ({u}, {v}) references an undeclared vertex")

    @property
    def loop_count(self) -> int:
        return sum(1 for u, v in self.edges if u == v)

    def to_edgelist(self) -> str:
        """Edge list with loops and parallel edges kept; edge-free vertices get their own line."""
        lines = [f"{u} {v}" for u, v in self.edges]
        touched = {x for edge in self.edges for x in edge}
        lines += [name for name in self.names if name not in touched]
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class Graph:
    """Unweighted simple graph over lexicographically interned vertex names."""

    names: tuple[str, ...]
    adjacency: tuple[tuple[VertexId, ...], ...]
    edges: frozenset[tuple[VertexId, VertexId]]

    @classmethod
    def from_edges(cls, names: Iterable[str], edges: Iterable[tuple[str, str]]) -> Graph:
        """Build a simple graph from vertex names and name pairs.

        Raises ValueError on loops, parallel edges or undeclared endpoints; use
        `normalize()` for raw input.
        """
        ordered = tuple(sorted(set(names), key=name_key))
        index = {name: i for i, name in enumerate(ordered)}
        pairs: set[tuple[VertexId, VertexId]] = set()
        for u, v in edges:
            if u not in index or v not in index:
                raise ValueError(f"Edge ({u}, {v}) references an undeclared vertex")
            a, b = index[u], index[v]
            if a == b:
                raise ValueError(f"Loop at vertex {u!r}; normalize() the raw graph first")
            pair = (a, b) if a < b else (b, a)
            if pair in pairs:
                raise ValueError(f"Parallel edge ({u}, {v}); normalize() the raw graph first")
            pairs.add(pair)
        return cls.from_index_pairs(ordered, pairs)

    @classmethod
    def from_index_pairs(
        cls, names: Sequence[str], pairs: Iterable[tuple[VertexId, VertexId]]
    ) -> Graph:
        """Build a graph from names already in interned order and index pairs."""
        ordered = tuple(names)
        if list(ordered) != sorted(ordered, key=name_key) or len(set(ordered)) != len(ordered):
            raise ValueError("Vertex names must be unique and sorted by byte order")
        neighbours: list[set[VertexId]] = [set() for _ in ordered]
        edge_set: set[tuple[VertexId, VertexId]] = set()
        for a, b in pairs:
            if a == b:
                raise ValueError(f"Loop at vertex index {a}")
            u, v = (a, b) if a < b else (b, a)
            edge_set.add((u, v))
            neighbours[u].add(v)
            neighbours[v].add(u)
        return cls(
            names=ordered,
            adjacency=tuple(tuple(sorted(adj)) for adj in neighbours),
            edges=frozenset(edge_set),
        )

    @property
    def m(self) -> int:
        """Vertex count."""
        return len(self.names)

    @property
    def n(self) -> int:
        """Edge count."""
        return len(self.edges)

    @cached_property
    def _index(self) -> dict[str, VertexId]:
        return {name: i for i, name in enumerate(self.names)}

    def index_of(self, name: str) -> VertexId:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"Unknown vertex name {name!r}") from None

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def degree(self, v: VertexId) -> int:
        return len(self.adjacency[v])

    def sorted_edges(self) -> list[tuple[VertexId, VertexId]]:
        return sorted(self.edges)

    def names_of(self, vertices: Iterable[VertexId]) -> list[str]:
        return [self.names[v] for v in vertices]

    def induced_subgraph(self, vertices: Iterable[VertexId]) -> Graph:
        """Subgraph on `vertices`, keeping the original names."""
        keep = sorted(set(vertices))
        remap = {old: new for new, old in enumerate(keep)}
        pairs = [(remap[u], remap[v]) for u, v in self.edges if u in remap and v in remap]
        return Graph.from_index_pairs([self.names[v] for v in keep], pairs)

    def to_raw(self) -> RawMultigraph:
        return RawMultigraph(
            names=self.names,
            edges=tuple((self.names[u], self.names[v]) for u, v in self.sorted_edges()),
        )


@dataclass(frozen=True)
class BfsLevels:
    """Vertices grouped by breadth-first depth from `seed`, sorted within each level."""

    seed: VertexId
    levels: tuple[tuple[VertexId, ...], ...]
    level_of: tuple[int, ...]


@dataclass(frozen=True)
class NormalizationReport:
    """Everything `normalize()` changed on the way to a simple graph."""

    collapsed: tuple[tuple[str, str, int], ...] = ()  # (u, v, dropped copies)
    loops: tuple[tuple[str, str], ...] = ()  # (vertex, dummy)
    renamed: tuple[tuple[str, str], ...] = ()  # (colliding name, chosen name)

    @property
    def is_empty(self) -> bool:
        return not (self.collapsed or self.loops or self.renamed)

    def lines(self) -> list[str]:
        lines = [
            f"collapsed {copies} parallel copies of ({u}, {v})" for u, v, copies in self.collapsed
        ]
        lines += [
            f"loop at {vertex} replaced by edge ({vertex}, {dummy})" for vertex, dummy in self.loops
        ]
        lines += [f"dummy name {old} already taken, used {new}" for old, new in self.renamed]
        return lines


@dataclass(frozen=True)
class Connectivity:
    """Status returned by `validate_simple_connected()`."""

    status: Literal["ok", "disconnected", "empty"]
    component_count: int

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _decode(text: str | bytes) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GraphParseError(f"input is not valid UTF-8 ({exc.reason})") from exc
    return text


def _parse_edgelist(lines: list[str]) -> RawMultigraph:
    names: dict[str, None] = {}
    edges: list[tuple[str, str]] = []
    for lineno, raw_line in enumerate(lines, start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) > 2:
            raise GraphParseError(f"expected one or two vertex names, got {len(tokens)}", lineno)
        for token in tokens:
            names.setdefault(token, None)
        if len(tokens) == 2:
            edges.append((tokens[0], tokens[1]))
    return RawMultigraph(names=tuple(names), edges=tuple(edges))


def _parse_count(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise GraphParseError(f"expected a non-negative integer, got {token!r}", lineno) from None
    if value < 0:
        raise GraphParseError(f"expected a non-negative integer, got {token!r}", lineno)
    return value


def _parse_dimacs(lines: list[str]) -> RawMultigraph:
    declared_vertices: int | None = None
    declared_edges = 0
    edges: list[tuple[str, str]] = []
    for lineno, raw_line in enumerate(lines, start=1):
        tokens = raw_line.split()
        if not tokens or tokens[0] == "c":
            continue
        tag = tokens[0]
        if tag == "p":
            if declared_vertices is not None:
                raise GraphParseError("duplicate problem line", lineno)
            if len(tokens) != 4 or tokens[1] != "edge":
                raise GraphParseError("expected 'p edge <m> <n>'", lineno)
            declared_vertices = _parse_count(tokens[2], lineno)
            declared_edges = _parse_count(tokens[3], lineno)
        elif tag == "e":
            if declared_vertices is None:
                raise GraphParseError("edge line before the 'p edge' problem line", lineno)
            if len(tokens) != 3:
                raise GraphParseError("expected 'e <u> <v>'", lineno)
            endpoints = []
            for token in tokens[1:]:
                vertex = _parse_count(token, lineno)
                if not 1 <= vertex <= declared_vertices:
                    raise GraphParseError(
                        f"vertex {vertex} outside 1..{declared_vertices} declared in header",
                        lineno,
                    )
                endpoints.append(str(vertex))
            edges.append((endpoints[0], endpoints[1]))
        else:
            raise GraphParseError(f"unknown DIMACS line type {tag!r}", lineno)

    if declared_vertices is None:
        raise GraphParseError("missing 'p edge <m> <n>' problem line")
    if declared_edges != len(edges):
        logger.warning(
            "DIMACS header declares %d edges but %d edge lines were read",
            declared_edges,
            len(edges),
        )
    names = tuple(str(v) for v in range(1, declared_vertices + 1))
    return RawMultigraph(names=names, edges=tuple(edges))


def parse_graph(text: str | bytes, format: GraphFormat = "edgelist") -> RawMultigraph:
    """
    Parse an edge-list or DIMACS stream verbatim.

    Args:
        text: UTF-8 text or bytes
        format: 'edgelist' or 'dimacs'

    Returns:
        RawMultigraph with loops and parallel edges preserved

    Raises:
        GraphParseError: on syntax errors, with the offending line number
    """
    lines = _decode(text).splitlines()
    if format == "edgelist":
        return _parse_edgelist(lines)
    if format == "dimacs":
        return _parse_dimacs(lines)
    raise ValueError(f"Unknown graph format: {format}")


def read_graph(path: str | Path, format: GraphFormat = "edgelist") -> RawMultigraph:
    """Read and parse a graph file."""
    return parse_graph(Path(path).read_bytes(), format=format)


def normalize(raw: RawMultigraph) -> tuple[Graph, NormalizationReport]:
    """
    Turn a raw multigraph into a simple graph.

    Parallel edges collapse to one edge. The K-th loop at v (K counted from 0) becomes a
    fresh vertex "v__loopK" joined to v; if that name is taken, K is incremented until
    the name is free and the collision is reported.
    """
    if not raw.names:
        raise ValueError("normalize() needs at least one vertex")

    taken = set(raw.names)
    next_ordinal: dict[str, int] = {}
    pair_counts: dict[tuple[str, str], int] = {}
    edges: list[tuple[str, str]] = []
    loops: list[tuple[str, str]] = []
    renamed: list[tuple[str, str]] = []

    for u, v in raw.edges:
        if u == v:
            ordinal = next_ordinal.get(u, 0)
            dummy = f"{u}__loop{ordinal}"
            while dummy in taken:
                rejected = dummy
                ordinal += 1
                dummy = f"{u}__loop{ordinal}"
                renamed.append((rejected, dummy))
                logger.warning("Dummy vertex name %s already exists; using %s", rejected, dummy)
            next_ordinal[u] = ordinal + 1
            taken.add(dummy)
            loops.append((u, dummy))
            edges.append((u, dummy))
            continue

        key = (u, v) if name_key(u) <= name_key(v) else (v, u)
        pair_counts[key] = pair_counts.get(key, 0) + 1
        if pair_counts[key] == 1:
            edges.append(key)

    collapsed = tuple((u, v, count - 1) for (u, v), count in pair_counts.items() if count > 1)
    report = NormalizationReport(collapsed=collapsed, loops=tuple(loops), renamed=tuple(renamed))
    return Graph.from_edges(taken, edges), report


def component_vertex_sets(g: Graph) -> list[list[VertexId]]:
    """Vertex sets of the connected components, ordered by their smallest vertex."""
    label = [-1] * g.m
    groups: list[list[VertexId]] = []
    for start in range(g.m):
        if label[start] != -1:
            continue
        label[start] = len(groups)
        members = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if label[w] == -1:
                    label[w] = label[start]
                    members.append(w)
                    queue.append(w)
        groups.append(sorted(members))
    return groups


def validate_simple_connected(g: Graph) -> Connectivity:
    """Report whether `g` is nonempty and connected."""
    if g.m == 0:
        return Connectivity(status="empty", component_count=0)
    count = len(component_vertex_sets(g))
    if count == 1:
        return Connectivity(status="ok", component_count=1)
    return Connectivity(status="disconnected", component_count=count)


def components(g: Graph) -> list[Graph]:
    """Connected components as induced subgraphs with the original names."""
    return [g.induced_subgraph(members) for members in component_vertex_sets(g)]


def bfs_levels(g: Graph, seed: VertexId) -> BfsLevels:
    """Canonical level-by-level BFS from `seed`; each level is sorted ascending."""
    if not 0 <= seed < g.m:
        raise ValueError(f"BFS seed {seed} out of range for a graph with {g.m} vertices")

    level_of = [-1] * g.m
    level_of[seed] = 0
    levels: list[tuple[VertexId, ...]] = []
    frontier = [seed]
    while frontier:
        levels.append(tuple(sorted(frontier)))
        depth = len(levels)
        upcoming: list[VertexId] = []
        for u in levels[-1]:
            for w in g.adjacency[u]:
                if level_of[w] == -1:
                    level_of[w] = depth
                    upcoming.append(w)
        frontier = upcoming

    if -1 in level_of:
        raise ValueError("bfs_levels() needs a connected graph; split it with components()")
    return BfsLevels(seed=seed, levels=tuple(levels), level_of=tuple(level_of))


def is_vertex_cover(g: Graph, cover: Iterable[VertexId]) -> bool:
    """True iff every edge of `g` has an endpoint in `cover`."""
    chosen = set(cover)
    return all(u in chosen or v in chosen for u, v in g.edges)


def to_edgelist(g: Graph) -> str:
    """Serialize as an edge list; isolated vertices get a single-token line."""
    lines = [f"{g.names[u]} {g.names[v]}" for u, v in g.sorted_edges()]
    lines += [g.names[v] for v in range(g.m) if not g.adjacency[v]]
    return "\n".join(lines) + ("\n" if lines else "")


def to_dimacs(g: Graph) -> str:
    """Serialize as DIMACS; non-integer names are renumbered and mapped in comments."""
    numeric = set(g.names) == {str(i) for i in range(1, g.m + 1)}
    if numeric:
        label = list(g.names)
        lines = []
    else:
        label = [str(v + 1) for v in range(g.m)]
        lines = [f"c name {label[v]} {g.names[v]}" for v in range(g.m)]
    lines.append(f"p edge {g.m} {g.n}")
    lines += [f"e {label[u]} {label[v]}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"
