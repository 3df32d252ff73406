"""
Vertex cover driver: maximum matching, then one guided pipeline per BFS seed.

For each seed in ascending order the driver builds BFS levels, the represents table and the
locally minimized cover, verifies the cover and keeps the smallest one. The loop stops early
once a cover meets the matching lower bound. Disconnected graphs are solved per component.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import Any

from dire_vertex_cover.config_loader import load_section
from dire_vertex_cover.graph import (
    Graph,
    VertexId,
    bfs_levels,
    component_vertex_sets,
    is_vertex_cover,
    name_key,
)
from dire_vertex_cover.local_minimization import LocalMinimizationError, local_minimization
from dire_vertex_cover.matching import Matching, perturbed_maximum_matching
from dire_vertex_cover.maximal_matching import (
    SELECTION_MODES,
    EventSink,
    LevelInvariantError,
    RepresentsTable,
    SelectionMode,
    guided_maximal_matching,
)

logger = logging.getLogger(__name__)

TRACE_KINDS = (
    "phase_start",
    "matching_done",
    "levels_done",
    "edge_selected",
    "row_appended",
    "frozen",
    "removed",
    "cascade",
    "seed_result",
    "final",
)


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the seed loop; `from_config()` reads the `solver` config section."""

    mode: SelectionMode = "tier-first"
    matching_perturbation: int = 0
    early_exit: bool = True

    def __post_init__(self):
        if self.mode not in SELECTION_MODES:
            raise ValueError(f"Unknown selection mode: {self.mode}")
        if self.matching_perturbation < 0:
            raise ValueError("matching_perturbation must be non-negative")

    @classmethod
    def from_config(cls, **overrides: Any) -> SolverConfig:
        section = load_section("solver")
        values = {
            "mode": section.get("mode", "tier-first"),
            "matching_perturbation": int(section.get("matching_perturbation", 0)),
            "early_exit": bool(section.get("early_exit", True)),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass(frozen=True)
class Diagnostic:
    """A seed whose candidate was discarded."""

    seed: VertexId
    kind: str  # 'stage3-assert', 'level-invariant' or 'unverified-cover'
    detail: str


@dataclass(frozen=True)
class CoverResult:
    cover: tuple[VertexId, ...]
    size: int
    seed: VertexId | None
    matching_lower_bound: int
    verified_cover: bool
    optimal_certified: bool
    freeze_order: tuple[VertexId, ...] = ()
    diagnostics: tuple[Diagnostic, ...] = ()
    component_seeds: tuple[VertexId | None, ...] = ()

    def cover_names(self, g: Graph) -> list[str]:
        return g.names_of(self.cover)


@dataclass(frozen=True)
class Decision:
    answer: bool
    reason: str  # 'matching-bound', 'witness' or 'exhausted'
    witness: CoverResult | None = None


@dataclass(frozen=True)
class TraceEvent:
    kind: str
    seed: str | None
    payload: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "seed": self.seed, "payload": self.payload})


def run_pipeline(
    g: Graph,
    em: Matching,
    seed: VertexId,
    mode: SelectionMode = "tier-first",
    on_event: EventSink | None = None,
) -> RepresentsTable:
    """Levels, guided maximal matching and local minimization for one seed of a connected graph."""
    levels = bfs_levels(g, seed)
    if on_event is not None:
        on_event("levels_done", {"levels": [g.names_of(level) for level in levels.levels]})
        on_event("phase_start", {"phase": "maximal-matching"})
    table = guided_maximal_matching(g, em, levels, mode=mode, on_event=on_event)
    if on_event is not None:
        on_event("phase_start", {"phase": "local-minimization"})
    local_minimization(table)
    return table


def _candidates(
    g: Graph,
    em: Matching,
    seeds: Iterable[VertexId],
    mode: SelectionMode,
    diagnostics: list[Diagnostic],
) -> Iterator[tuple[VertexId, RepresentsTable]]:
    """Yield (seed, table) for every seed whose cover verifies; record the others."""
    for seed in seeds:
        try:
            table = run_pipeline(g, em, seed, mode)
        except LocalMinimizationError as exc:
            diagnostics.append(Diagnostic(seed, "stage3-assert", str(exc)))
            logger.warning("Seed %s discarded: %s", g.names[seed], exc)
            continue
        except LevelInvariantError as exc:
            diagnostics.append(Diagnostic(seed, "level-invariant", str(exc)))
            logger.warning("Seed %s discarded: %s", g.names[seed], exc)
            continue
        if not is_vertex_cover(g, table.cover):
            diagnostics.append(
                Diagnostic(seed, "unverified-cover", f"{g.names_of(table.cover)} misses an edge")
            )
            logger.warning("Seed %s produced a non-cover; candidate discarded", g.names[seed])
            continue
        logger.debug("Seed %s: cover of size %d", g.names[seed], len(table.cover))
        yield seed, table


def _result(
    cover: Iterable[VertexId],
    seed: VertexId | None,
    lower_bound: int,
    freeze_order: Iterable[VertexId],
    diagnostics: Iterable[Diagnostic],
    component_seeds: Iterable[VertexId | None] = (),
) -> CoverResult:
    ordered = tuple(sorted(cover))
    return CoverResult(
        cover=ordered,
        size=len(ordered),
        seed=seed,
        matching_lower_bound=lower_bound,
        verified_cover=True,
        optimal_certified=len(ordered) == lower_bound,
        freeze_order=tuple(freeze_order),
        diagnostics=tuple(diagnostics),
        component_seeds=tuple(component_seeds),
    )


def _solve_connected(g: Graph, config: SolverConfig, seeds: list[VertexId]) -> CoverResult:
    em = perturbed_maximum_matching(g, config.matching_perturbation)
    diagnostics: list[Diagnostic] = []
    best: tuple[VertexId, RepresentsTable] | None = None
    for seed, table in _candidates(g, em, seeds, config.mode, diagnostics):
        if best is None or len(table.cover) < len(best[1].cover):
            best = (seed, table)
        if config.early_exit and len(table.cover) == len(em):
            break
    if best is None:
        raise RuntimeError(f"No BFS seed produced a verified cover ({len(diagnostics)} discarded)")
    seed, table = best
    return _result(table.cover, seed, len(em), table.cover, diagnostics, (seed,))


def _resolve_seed(g: Graph, seed: str | VertexId | None) -> VertexId | None:
    if seed is None or isinstance(seed, int):
        if seed is not None and not 0 <= seed < g.m:
            raise ValueError(f"BFS seed {seed} out of range")
        return seed
    return g.index_of(seed)


def solve(
    g: Graph, config: SolverConfig | None = None, only_seed: str | VertexId | None = None
) -> CoverResult:
    """
    Smallest verified cover over all BFS seeds.

    Args:
        g: Simple graph; disconnected graphs are solved per component
        config: Selection mode, matching perturbation and early exit (defaults from config)
        only_seed: Restrict the seed loop to this vertex (name or id)

    Returns:
        CoverResult; `seed` is None when the graph has more than one component
    """
    config = config or SolverConfig.from_config()
    pinned = _resolve_seed(g, only_seed)
    if g.m == 0:
        return _result((), None, 0, (), ())

    groups = component_vertex_sets(g)
    if len(groups) == 1:
        seeds = [pinned] if pinned is not None else list(range(g.m))
        return _solve_connected(g, config, seeds)

    cover: list[VertexId] = []
    freeze_order: list[VertexId] = []
    diagnostics: list[Diagnostic] = []
    component_seeds: list[VertexId | None] = []
    lower_bound = 0
    for members in groups:
        sub = g.induced_subgraph(members)
        if pinned is not None and pinned in members:
            seeds = [members.index(pinned)]
        else:
            seeds = list(range(sub.m))
        part = _solve_connected(sub, config, seeds)
        cover += [members[v] for v in part.cover]
        freeze_order += [members[v] for v in part.freeze_order]
        diagnostics += [
            Diagnostic(members[d.seed], d.kind, d.detail) for d in part.diagnostics
        ]
        component_seeds.append(members[part.seed] if part.seed is not None else None)
        lower_bound += part.matching_lower_bound
    return _result(cover, None, lower_bound, freeze_order, diagnostics, component_seeds)


def decide(g: Graph, k: int, config: SolverConfig | None = None) -> Decision:
    """
    Decision form: is there a cover of size at most k?

    Answers NO straight away when k is below the maximum matching size; otherwise runs the
    seed loop and answers YES with the first seed whose cover fits.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    config = config or SolverConfig.from_config()

    groups = component_vertex_sets(g)
    if len(groups) > 1:
        lower = sum(
            len(perturbed_maximum_matching(g.induced_subgraph(m), config.matching_perturbation))
            for m in groups
        )
        if k < lower:
            return Decision(answer=False, reason="matching-bound")
        result = solve(g, config)
        if result.size <= k:
            return Decision(answer=True, reason="witness", witness=result)
        return Decision(answer=False, reason="exhausted")

    em = perturbed_maximum_matching(g, config.matching_perturbation)
    if k < len(em):
        return Decision(answer=False, reason="matching-bound")
    diagnostics: list[Diagnostic] = []
    for seed, table in _candidates(g, em, range(g.m), config.mode, diagnostics):
        if len(table.cover) <= k:
            witness = _result(table.cover, seed, len(em), table.cover, diagnostics, (seed,))
            return Decision(answer=True, reason="witness", witness=witness)
    if g.m == 0:
        return Decision(answer=True, reason="witness", witness=_result((), None, 0, (), ()))
    return Decision(answer=False, reason="exhausted")


def trace(
    g: Graph, seed: str | VertexId, config: SolverConfig | None = None
) -> list[TraceEvent]:
    """
    Full event log of one seed's pipeline.

    On a disconnected graph only the component containing the seed is traced.
    Event payloads name vertices by their names.
    """
    config = config or SolverConfig.from_config()
    pinned = _resolve_seed(g, seed)
    if pinned is None:
        raise ValueError("trace() needs a seed")

    members = next(m for m in component_vertex_sets(g) if pinned in m)
    sub = g.induced_subgraph(members) if len(members) < g.m else g
    local_seed = members.index(pinned)
    seed_name = g.names[pinned]

    events: list[TraceEvent] = []

    def record(kind: str, payload: dict[str, Any]) -> None:
        events.append(TraceEvent(kind=kind, seed=seed_name, payload=payload))

    record("phase_start", {"phase": "matching", "mode": config.mode})
    em = perturbed_maximum_matching(sub, config.matching_perturbation)
    record(
        "matching_done",
        {
            "edges": [sub.names_of(edge) for edge in em.sorted_edges()],
            "size": len(em),
            "perturbation": config.matching_perturbation,
        },
    )
    record("phase_start", {"phase": "levels"})
    table = run_pipeline(sub, em, local_seed, config.mode, on_event=record)
    cover = sub.names_of(sorted(table.cover))
    verified = is_vertex_cover(sub, table.cover)
    record("seed_result", {"cover": cover, "size": len(cover), "verified": verified})
    record(
        "final",
        {"cover": cover, "size": len(cover), "optimal_certified": len(cover) == len(em)},
    )
    return events


def replay_trace(events: Iterable[TraceEvent | dict[str, Any]]) -> list[str]:
    """
    Rebuild the cover of a trace from its row_appended, frozen and removed events.

    Raises:
        ValueError: if a frozen or removed vertex was never appended, a vertex is both
            frozen and removed, or the rebuilt cover disagrees with the final event
    """
    endpoints: set[str] = set()
    frozen: list[str] = []
    removed: set[str] = set()
    final: list[str] | None = None
    for event in events:
        kind, payload = (
            (event.kind, event.payload)
            if isinstance(event, TraceEvent)
            else (event["kind"], event["payload"])
        )
        if kind == "row_appended":
            endpoints.update((payload["node1"], payload["node2"]))
        elif kind in ("frozen", "removed"):
            vertex = payload["vertex"]
            if vertex not in endpoints:
                raise ValueError(f"Vertex {vertex} was {kind} before being appended")
            if vertex in removed or vertex in frozen:
                raise ValueError(f"Vertex {vertex} changed status twice")
            if kind == "frozen":
                frozen.append(vertex)
            else:
                removed.add(vertex)
        elif kind == "final":
            final = list(payload["cover"])

    cover = sorted(frozen, key=name_key)
    if final is not None and sorted(final, key=name_key) != cover:
        raise ValueError(f"Replayed cover {cover} disagrees with final event {final}")
    return cover


def events_to_jsonl(events: Iterable[TraceEvent]) -> str:
    return "".join(event.to_json() + "\n" for event in events)

