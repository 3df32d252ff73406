"""
Reductions between vertex cover and committee feasibility, and the transform to a simple
connected graph.

Committee feasibility here is the diverse-and-representative variant restricted to groups and
approval sets of at most two candidates with bounds of one: pick at most k candidates hitting
every nonempty group and every nonempty approval set.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Any

from dire_vertex_cover.config_loader import get_parameter
from dire_vertex_cover.graph import Graph, RawMultigraph, VertexId, is_vertex_cover, name_key
from dire_vertex_cover.oracle import OracleLimitError

logger = logging.getLogger(__name__)

HUB_NAME = "u__hub"


@dataclass(frozen=True)
class Population:
    approves: tuple[str, ...]

    @property
    def bound(self) -> int:
        return 1 if self.approves else 0


@dataclass(frozen=True)
class DiReInstance:
    """Committee feasibility instance with groups and approval sets of size at most two."""

    candidates: tuple[str, ...]
    groups: tuple[tuple[str, ...], ...]
    populations: tuple[Population, ...]
    k: int

    def __post_init__(self):
        known = set(self.candidates)
        if len(known) != len(self.candidates):
            raise ValueError("Candidate names must be unique")
        if self.k < 0:
            raise ValueError(f"Committee size k must be non-negative, got {self.k}")
        subsets = [("group", g) for g in self.groups]
        subsets += [("approval set", p.approves) for p in self.populations]
        for label, members in subsets:
            if len(members) > 2:
                raise ValueError(f"A {label} has {len(members)} candidates; at most 2 allowed")
            if len(set(members)) != len(members):
                raise ValueError(f"A {label} repeats a candidate: {list(members)}")
            unknown = [c for c in members if c not in known]
            if unknown:
                raise ValueError(f"A {label} names unknown candidates {unknown}")

    @property
    def diversity_bounds(self) -> tuple[int, ...]:
        return tuple(1 if group else 0 for group in self.groups)

    @property
    def representation_bounds(self) -> tuple[int, ...]:
        return tuple(p.bound for p in self.populations)

    def is_feasible(self, committee: tuple[str, ...] | list[str]) -> bool:
        chosen = set(committee)
        if len(chosen) > self.k or not chosen <= set(self.candidates):
            return False
        hits = [set(group) for group in self.groups if group]
        hits += [set(p.approves) for p in self.populations if p.approves]
        return all(members & chosen for members in hits)

    def to_json(self) -> dict[str, Any]:
        return {
            "candidates": list(self.candidates),
            "groups": [list(group) for group in self.groups],
            "populations": [{"approves": list(p.approves)} for p in self.populations],
            "k": self.k,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> DiReInstance:
        try:
            return cls(
                candidates=tuple(str(c) for c in data["candidates"]),
                groups=tuple(tuple(str(c) for c in group) for group in data.get("groups", [])),
                populations=tuple(
                    Population(tuple(str(c) for c in p["approves"]))
                    for p in data.get("populations", [])
                ),
                k=int(data["k"]),
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"Malformed committee instance: {exc!r}") from exc


def read_dire(path: str | Path) -> DiReInstance:
    with Path(path).open(encoding="utf-8") as handle:
        return DiReInstance.from_json(json.load(handle))


def write_dire(instance: DiReInstance, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(instance.to_json(), indent=2) + "\n", encoding="utf-8")
    return path


@dataclass(frozen=True)
class DiReDecision:
    feasible: bool
    committee: tuple[str, ...] | None = None


def vc_to_dire(g: Graph, k: int) -> DiReInstance:
    """One candidate per vertex; one group and one population per edge."""
    pairs = tuple((g.names[u], g.names[v]) for u, v in g.sorted_edges())
    return DiReInstance(
        candidates=g.names,
        groups=pairs,
        populations=tuple(Population(pair) for pair in pairs),
        k=k,
    )


def dire_to_vc(d: DiReInstance) -> tuple[RawMultigraph, int]:
    """
    One vertex per candidate; size-2 subsets become edges, singletons become loops and
    empty subsets are dropped. The result may hold loops and parallel edges.
    """
    edges: list[tuple[str, str]] = []
    for members in [*d.groups, *(p.approves for p in d.populations)]:
        if len(members) == 2:
            edges.append((members[0], members[1]))
        elif len(members) == 1:
            edges.append((members[0], members[0]))
    return RawMultigraph(names=d.candidates, edges=tuple(edges)), d.k


def dire_feasible_bruteforce(d: DiReInstance, limit: int | None = None) -> DiReDecision:
    """
    Exhaustive committee search.

    Committees are tried by size, then lexicographically in candidate order; the first
    feasible one is returned.
    """
    if limit is None:
        limit = int(get_parameter("oracle", "dire_max_candidates"))
    if len(d.candidates) > limit:
        raise OracleLimitError(
            f"Candidate count {len(d.candidates)} exceeds the oracle limit of {limit}"
        )
    index = {c: i for i, c in enumerate(d.candidates)}
    masks = []
    for members in [*d.groups, *(p.approves for p in d.populations)]:
        if members:
            masks.append(sum(1 << index[c] for c in members))

    for size in range(min(d.k, len(d.candidates)) + 1):
        for subset in combinations(range(len(d.candidates)), size):
            chosen = sum(1 << i for i in subset)
            if all(chosen & mask for mask in masks):
                return DiReDecision(True, tuple(d.candidates[i] for i in subset))
    return DiReDecision(False)


def cover_to_committee(d: DiReInstance, cover: list[str] | tuple[str, ...]) -> tuple[str, ...]:
    """A vertex cover of the reduced graph is a committee under the same names."""
    committee = tuple(sorted(set(cover), key=d.candidates.index))
    if not d.is_feasible(committee):
        raise ValueError(f"{list(cover)} is not a feasible committee")
    return committee


def committee_to_cover(g: Graph, committee: list[str] | tuple[str, ...]) -> list[VertexId]:
    """A feasible committee of vc_to_dire(g, k) is a vertex cover of g."""
    cover = sorted(g.index_of(name) for name in set(committee))
    if not is_vertex_cover(g, cover):
        raise ValueError(f"Committee {list(committee)} does not cover every edge")
    return cover


@dataclass(frozen=True)
class NormalizedVc2Instance:
    """Simple connected graph built from a raw multigraph, with its bookkeeping."""

    graph: Graph
    original_vertices: tuple[str, ...]
    loop_dummies: tuple[tuple[str, str], ...]  # (dummy, looped vertex)
    hub: str
    hub_edges: tuple[tuple[str, str], ...]
    k_prime: int
    renamed: tuple[tuple[str, str], ...] = ()

    @property
    def dummy_names(self) -> frozenset[str]:
        return frozenset(dummy for dummy, _ in self.loop_dummies)


def _fresh_name(
    candidate: str, taken: set[str], suffix: str, renamed: list[tuple[str, str]]
) -> str:
    ordinal = 0
    name = candidate
    while name in taken:
        ordinal += 1
        name = f"{candidate}{suffix}{ordinal}"
    if name != candidate:
        renamed.append((candidate, name))
        logger.warning("Name %s already exists; using %s", candidate, name)
    taken.add(name)
    return name


def to_simple_connected(raw: RawMultigraph, k: int) -> NormalizedVc2Instance:
    """
    Collapse parallel edges, give every loop at v its own dummy "d__<v>_<ordinal>" joined
    to v, and join a hub "u__hub" to every vertex. The cover bound k grows by one.

    Ordinals count up from 0 per vertex; a taken name moves on to the next free ordinal.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    taken = set(raw.names)
    renamed: list[tuple[str, str]] = []

    pairs: set[tuple[str, str]] = set()
    loop_counts: dict[str, int] = {}
    for u, v in raw.edges:
        if u == v:
            loop_counts[u] = loop_counts.get(u, 0) + 1
            continue
        pairs.add((u, v) if name_key(u) <= name_key(v) else (v, u))

    loop_dummies = []
    for vertex in sorted(loop_counts, key=name_key):
        base = f"d__{vertex}_"
        ordinal = 0
        for _ in range(loop_counts[vertex]):
            candidate = f"{base}{ordinal}"
            while f"{base}{ordinal}" in taken:
                ordinal += 1
            dummy = f"{base}{ordinal}"
            if dummy != candidate:
                renamed.append((candidate, dummy))
                logger.warning("Dummy name %s already exists; using %s", candidate, dummy)
            ordinal += 1
            taken.add(dummy)
            loop_dummies.append((dummy, vertex))
            pairs.add((vertex, dummy))

    hub = _fresh_name(HUB_NAME, taken, "_", renamed)
    hub_edges = tuple(
        (hub, v) for v in sorted([*raw.names, *(d for d, _ in loop_dummies)], key=name_key)
    )
    graph = Graph.from_edges(taken, [*pairs, *hub_edges])
    return NormalizedVc2Instance(
        graph=graph,
        original_vertices=tuple(sorted(raw.names, key=name_key)),
        loop_dummies=tuple(loop_dummies),
        hub=hub,
        hub_edges=hub_edges,
        k_prime=k + 1,
        renamed=tuple(renamed),
    )


def _names(
    instance: NormalizedVc2Instance, cover: list[VertexId] | tuple[VertexId, ...]
) -> set[str]:
    chosen = set(instance.graph.names_of(cover))
    if not is_vertex_cover(instance.graph, cover):
        raise ValueError("Not a vertex cover of the transformed graph")
    return chosen


def exchange_to_hub(
    instance: NormalizedVc2Instance, cover: list[VertexId] | tuple[VertexId, ...]
) -> list[VertexId]:
    """
    Return a cover of the same size that contains the hub.

    A cover without the hub holds every other vertex, so one loop dummy (or, failing that,
    one original vertex) can be traded for the hub.
    """
    g = instance.graph
    chosen = _names(instance, cover)
    if instance.hub in chosen or not chosen:
        return sorted(cover)
    dummies = sorted(chosen & instance.dummy_names, key=name_key)
    victim = dummies[0] if dummies else sorted(chosen, key=name_key)[0]
    return sorted(g.index_of(name) for name in (chosen - {victim}) | {instance.hub})


def cover_case(
    instance: NormalizedVc2Instance, cover: list[VertexId] | tuple[VertexId, ...]
) -> int:
    """
    Classify a cover of the transformed graph by which vertex kinds it contains.

    Returns:
        1: originals and hub, no dummies
        2: dummies and hub (originals optional)
        3: originals only
        4: hub only

    Raises:
        ValueError: for the combinations that cannot form a cover once the hub exchange
            has been applied (no hub but dummies present, or nothing at all)
    """
    chosen = _names(instance, cover)
    has_dummy = bool(chosen & instance.dummy_names)
    has_hub = instance.hub in chosen
    has_original = bool(chosen - instance.dummy_names - {instance.hub})
    if has_hub:
        if has_dummy:
            return 2
        return 1 if has_original else 4
    if has_original and not has_dummy:
        return 3
    raise ValueError(
        f"Cover kinds (dummies={has_dummy}, originals={has_original}, hub={has_hub}) "
        "are not possible; apply exchange_to_hub() first"
    )


def lift_cover(
    instance: NormalizedVc2Instance, cover: list[VertexId] | tuple[VertexId, ...]
) -> list[str]:
    """Map a cover of the transformed graph back to original vertex names (hub dropped)."""
    chosen = _names(instance, cover)
    looped = dict(instance.loop_dummies)
    lifted = {looped.get(name, name) for name in chosen if name != instance.hub}
    return sorted(lifted, key=name_key)
