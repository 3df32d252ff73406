"""
Differential testing of the seed-loop solver against the exact oracle.

Compares solver covers with exact minimum covers over exhaustively enumerated and random
connected graphs, across a matrix of run modes:
- selection mode (tier-first or vertex-first)
- maximum-matching perturbation id

Every disagreement is persisted as a self-contained counterexample directory that replays
to the same classification.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import shutil
import tempfile
import time
from collections import Counter
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import combinations
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from dire_vertex_cover.config_loader import get_parameter, load_section
from dire_vertex_cover.graph import (
    Graph,
    is_vertex_cover,
    normalize,
    parse_graph,
    to_edgelist,
    validate_simple_connected,
)
from dire_vertex_cover.maximal_matching import SelectionMode
from dire_vertex_cover.oracle import OracleLimitError, exact_mvc
from dire_vertex_cover.solver import CoverResult, SolverConfig, solve

logger = logging.getLogger(__name__)

GRAPH_FILE = "graph.el"
MINIMIZED_FILE = "minimized.el"
CONFIG_FILE = "config.json"
COVERS_FILE = "covers.json"
REPLAY_FILE = "REPLAY"
# Works from any working directory: `sh <counterexample>/REPLAY`.
REPLAY_SCRIPT = '#!/bin/sh\nexec dire-vc replay "$(dirname "$0")"\n'


class Classification(Enum):
    AGREE = "AGREE"
    SUBOPTIMAL = "SUBOPTIMAL"
    INVALID_COVER = "INVALID_COVER"
    STAGE3_ASSERT_FAIL = "STAGE3_ASSERT_FAIL"

    @property
    def is_hard_failure(self) -> bool:
        return self in (Classification.INVALID_COVER, Classification.STAGE3_ASSERT_FAIL)


@dataclass(frozen=True)
class RunMode:
    mode: SelectionMode = "tier-first"
    matching_perturbation: int = 0

    @property
    def label(self) -> str:
        return f"{self.mode}/p{self.matching_perturbation}"

    def solver_config(self) -> SolverConfig:
        return SolverConfig(mode=self.mode, matching_perturbation=self.matching_perturbation)


def default_modes() -> list[RunMode]:
    """The configured selection-mode x perturbation matrix."""
    section = load_section("harness")
    return [
        RunMode(mode=mode, matching_perturbation=int(perturbation))
        for mode in section.get("modes", ["tier-first"])
        for perturbation in section.get("matching_perturbations", [0])
    ]


@dataclass(frozen=True)
class Counterexample:
    """Everything needed to reproduce one disagreement."""

    graph_text: str
    run_mode: RunMode
    algo_cover: tuple[str, ...]
    oracle_cover: tuple[str, ...]
    classification: Classification
    rng_seed: int | None = None
    source: str = "manual"
    minimized_text: str | None = None

    @property
    def algo_size(self) -> int:
        return len(self.algo_cover)

    @property
    def oracle_size(self) -> int:
        return len(self.oracle_cover)

    @property
    def directory_name(self) -> str:
        digest = hashlib.sha256(f"{self.run_mode.label}\n{self.graph_text}".encode()).hexdigest()
        return f"{self.classification.value.lower()}-{digest[:12]}"

    def graph(self) -> Graph:
        graph, _ = normalize(parse_graph(self.graph_text))
        return graph

    def write(self, out_dir: str | Path) -> Path:
        """Persist atomically as `out_dir/<directory_name>`; an existing copy is kept."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        final = out_dir / self.directory_name
        if final.exists():
            return final

        staging = Path(tempfile.mkdtemp(prefix=".tmp-", dir=out_dir))
        (staging / GRAPH_FILE).write_text(self.graph_text, encoding="utf-8")
        if self.minimized_text is not None:
            (staging / MINIMIZED_FILE).write_text(self.minimized_text, encoding="utf-8")
        config = {
            "classification": self.classification.value,
            "matching_perturbation": self.run_mode.matching_perturbation,
            "mode": self.run_mode.mode,
            "rng_seed": self.rng_seed,
            "source": self.source,
        }
        covers = {
            "algorithm": {"cover": list(self.algo_cover), "size": self.algo_size},
            "oracle": {"cover": list(self.oracle_cover), "size": self.oracle_size},
        }
        (staging / CONFIG_FILE).write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
        (staging / COVERS_FILE).write_text(json.dumps(covers, indent=2) + "\n", encoding="utf-8")
        (staging / REPLAY_FILE).write_text(REPLAY_SCRIPT, encoding="utf-8")
        try:
            os.replace(staging, final)
        except OSError:
            shutil.rmtree(staging, ignore_errors=True)
            if not final.exists():
                raise
        return final

    @classmethod
    def read(cls, path: str | Path) -> Counterexample:
        path = Path(path)
        config = json.loads((path / CONFIG_FILE).read_text(encoding="utf-8"))
        covers = json.loads((path / COVERS_FILE).read_text(encoding="utf-8"))
        minimized = path / MINIMIZED_FILE
        return cls(
            graph_text=(path / GRAPH_FILE).read_text(encoding="utf-8"),
            run_mode=RunMode(config["mode"], int(config["matching_perturbation"])),
            algo_cover=tuple(covers["algorithm"]["cover"]),
            oracle_cover=tuple(covers["oracle"]["cover"]),
            classification=Classification(config["classification"]),
            rng_seed=config.get("rng_seed"),
            source=config.get("source", "manual"),
            minimized_text=minimized.read_text(encoding="utf-8") if minimized.exists() else None,
        )


@dataclass(frozen=True)
class InstanceOutcome:
    source: str
    m: int
    n: int
    run_mode: RunMode
    classification: Classification | None  # None when the oracle skipped the instance
    algo_size: int | None = None
    oracle_size: int | None = None
    seconds: float = 0.0
    counterexample: Counterexample | None = None


@dataclass
class RunReport:
    """Aggregated outcome of a differential or scaling run; merges are commutative."""

    instances: dict[str, int] = field(default_factory=dict)
    classifications: dict[str, int] = field(default_factory=dict)
    per_mode: dict[str, dict[str, int]] = field(default_factory=dict)
    skipped: int = 0
    counterexamples: list[str] = field(default_factory=list)
    seconds: list[float] = field(default_factory=list)
    scaling_samples: list[dict[str, Any]] = field(default_factory=list)
    slope: float | None = None
    polynomial_consistent: bool | None = None

    @property
    def total(self) -> int:
        return sum(self.classifications.values())

    @property
    def agreements(self) -> int:
        return self.classifications.get(Classification.AGREE.value, 0)

    @property
    def disagreements(self) -> int:
        return self.total - self.agreements

    @property
    def agreement_rate(self) -> float | None:
        return self.agreements / self.total if self.total else None

    @property
    def counterexample_count(self) -> int:
        return len(self.counterexamples)

    @property
    def hard_failures(self) -> int:
        return sum(
            self.classifications.get(c.value, 0) for c in Classification if c.is_hard_failure
        )

    def record(self, outcome: InstanceOutcome, counterexample_path: str | None = None) -> None:
        self.seconds.append(outcome.seconds)
        if outcome.classification is None:
            self.skipped += 1
            return
        key = outcome.classification.value
        self.classifications[key] = self.classifications.get(key, 0) + 1
        mode_counts = self.per_mode.setdefault(outcome.run_mode.label, {})
        mode_counts[key] = mode_counts.get(key, 0) + 1
        if counterexample_path is not None:
            self.counterexamples.append(counterexample_path)

    def merge(self, other: RunReport) -> RunReport:
        per_mode: dict[str, dict[str, int]] = {}
        for label in sorted(set(self.per_mode) | set(other.per_mode)):
            counts = Counter(self.per_mode.get(label, {})) + Counter(other.per_mode.get(label, {}))
            per_mode[label] = dict(sorted(counts.items()))
        samples = sorted(
            [*self.scaling_samples, *other.scaling_samples], key=lambda s: (s["m"], s["trial"])
        )
        return RunReport(
            instances=dict(sorted((Counter(self.instances) + Counter(other.instances)).items())),
            classifications=dict(
                sorted((Counter(self.classifications) + Counter(other.classifications)).items())
            ),
            per_mode=per_mode,
            skipped=self.skipped + other.skipped,
            counterexamples=sorted(set(self.counterexamples) | set(other.counterexamples)),
            seconds=sorted([*self.seconds, *other.seconds]),
            scaling_samples=samples,
        )

    def samples_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            self.scaling_samples, columns=["m", "trial", "edges", "seconds", "cover_size"]
        )

    def to_json(self, include_timing: bool = True) -> dict[str, Any]:
        data: dict[str, Any] = {
            "instances": dict(sorted(self.instances.items())),
            "total": self.total,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "agreement_rate": self.agreement_rate,
            "classifications": dict(sorted(self.classifications.items())),
            "per_mode": {k: dict(sorted(v.items())) for k, v in sorted(self.per_mode.items())},
            "skipped": self.skipped,
            "counterexamples": sorted(self.counterexamples),
        }
        if self.scaling_samples or self.slope is not None:
            data["slope"] = self.slope
            data["polynomial_consistent"] = self.polynomial_consistent
        if include_timing:
            timings = np.asarray(self.seconds, dtype=float)
            data["timing"] = {
                "total_seconds": float(timings.sum()) if timings.size else 0.0,
                "mean_seconds": float(timings.mean()) if timings.size else None,
                "max_seconds": float(timings.max()) if timings.size else None,
            }
            if self.scaling_samples:
                data["scaling_samples"] = self.scaling_samples
        return data

    def summary(self) -> str:
        sources = ", ".join(f"{k}={v}" for k, v in sorted(self.instances.items()))
        lines = [
            f"Instances: {sources or 'none'}",
            f"Evaluations: {self.total} (skipped {self.skipped})",
        ]
        if self.agreement_rate is not None:
            lines.append(f"Agreement rate: {self.agreement_rate:.2%}")
        for name, count in sorted(self.classifications.items()):
            lines.append(f"  {name}: {count}")
        for label, counts in sorted(self.per_mode.items()):
            details = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
            lines.append(f"  [{label}] {details}")
        lines.append(f"Counterexamples persisted: {self.counterexample_count}")
        if self.slope is not None:
            lines.append(f"Log-log slope: {self.slope:.2f}")
        return "\n".join(lines)


def padded_names(m: int) -> list[str]:
    """Zero-padded decimal names whose byte order matches numeric order."""
    width = len(str(max(m - 1, 0)))
    return [f"{i:0{width}d}" for i in range(m)]


def _prufer_tree(m: int, rng: np.random.Generator) -> set[tuple[int, int]]:
    if m < 2:
        return set()
    if m == 2:
        return {(0, 1)}
    sequence = [int(x) for x in rng.integers(0, m, size=m - 2)]
    degree = [1] * m
    for x in sequence:
        degree[x] += 1
    edges = set()
    for x in sequence:
        leaf = next(v for v in range(m) if degree[v] == 1)
        edges.add((min(leaf, x), max(leaf, x)))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = (w for w in range(m) if degree[w] == 1)
    edges.add((u, v))
    return edges


def gen_random_connected(m: int, p: float, rng_seed: int) -> Graph:
    """
    Uniform random spanning tree (Prüfer sequence) plus each other edge with probability p.

    Deterministic per `rng_seed`.
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Edge probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(rng_seed)
    tree = _prufer_tree(m, rng)
    others = [pair for pair in combinations(range(m), 2) if pair not in tree]
    draws = rng.random(len(others))
    extra = [pair for pair, draw in zip(others, draws) if draw < p]
    return Graph.from_index_pairs(padded_names(m), [*tree, *extra])


def _mask_connected(m: int, neighbours: list[int]) -> bool:
    reached = 1
    frontier = 1
    while frontier:
        grown = 0
        bits = frontier
        while bits:
            low = bits & -bits
            grown |= neighbours[low.bit_length() - 1]
            bits ^= low
        frontier = grown & ~reached
        reached |= grown
    return reached == (1 << m) - 1


def enumerate_connected(m: int, limit: int | None = None) -> Iterator[Graph]:
    """Every labeled connected simple graph on m vertices, by ascending edge bitmask."""
    if limit is None:
        limit = int(get_parameter("harness", "exhaustive_max"))
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    if m > limit:
        raise ValueError(f"Exhaustive enumeration is limited to {limit} vertices, got {m}")
    names = padded_names(m)
    pairs = list(combinations(range(m), 2))
    for mask in range(1 << len(pairs)):
        chosen = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        neighbours = [0] * m
        for u, v in chosen:
            neighbours[u] |= 1 << v
            neighbours[v] |= 1 << u
        if _mask_connected(m, neighbours):
            yield Graph.from_index_pairs(names, chosen)


Instance = tuple[str, Graph, int | None]


def exhaustive_source(max_m: int, limit: int | None = None) -> Iterator[Instance]:
    """Every connected graph with 1..max_m vertices; max_m is checked against the limit first."""
    if limit is None:
        limit = int(get_parameter("harness", "exhaustive_max"))
    if max_m > limit:
        raise ValueError(f"Exhaustive enumeration is limited to {limit} vertices, got {max_m}")
    return (
        ("exhaustive", g, None)
        for m in range(1, max_m + 1)
        for g in enumerate_connected(m, limit=limit)
    )


def random_source(
    trials: int,
    max_vertices: int,
    rng_seed: int = 0,
    edge_probability_range: Sequence[float] = (0.05, 0.6),
) -> Iterator[Instance]:
    """Random connected graphs; instance i is seeded from (rng_seed, i)."""
    low, high = edge_probability_range
    for i in range(trials):
        instance_seed = int(np.random.SeedSequence([rng_seed, i]).generate_state(1)[0])
        params = np.random.default_rng([rng_seed, i])
        m = int(params.integers(1, max_vertices + 1))
        p = float(params.uniform(low, high))
        yield "random", gen_random_connected(m, p, instance_seed), instance_seed


def classify(g: Graph, result: CoverResult | None, oracle: CoverResult) -> Classification:
    """Compare one solver result with the exact cover."""
    if result is None:
        return Classification.INVALID_COVER
    kinds = {d.kind for d in result.diagnostics}
    if "stage3-assert" in kinds:
        return Classification.STAGE3_ASSERT_FAIL
    if kinds & {"unverified-cover", "level-invariant"} or not is_vertex_cover(g, result.cover):
        return Classification.INVALID_COVER
    if result.size > oracle.size:
        return Classification.SUBOPTIMAL
    return Classification.AGREE


def evaluate_instance(
    g: Graph,
    run_mode: RunMode,
    source: str = "manual",
    rng_seed: int | None = None,
    oracle_limit: int | None = None,
) -> InstanceOutcome:
    """Run solver and oracle on one graph and classify the result."""
    start = time.perf_counter()
    try:
        oracle = exact_mvc(g, limit=oracle_limit)
    except OracleLimitError as exc:
        logger.warning("Skipping %s instance with %d vertices: %s", source, g.m, exc)
        return InstanceOutcome(source, g.m, g.n, run_mode, None)

    try:
        result: CoverResult | None = solve(g, run_mode.solver_config())
    except RuntimeError as exc:
        logger.warning("Solver returned no cover: %s", exc)
        result = None
    classification = classify(g, result, oracle)
    seconds = time.perf_counter() - start

    counterexample = None
    if classification is not Classification.AGREE:
        counterexample = Counterexample(
            graph_text=to_edgelist(g),
            run_mode=run_mode,
            algo_cover=tuple(result.cover_names(g)) if result is not None else (),
            oracle_cover=tuple(oracle.cover_names(g)),
            classification=classification,
            rng_seed=rng_seed,
            source=source,
        )
    return InstanceOutcome(
        source=source,
        m=g.m,
        n=g.n,
        run_mode=run_mode,
        classification=classification,
        algo_size=result.size if result is not None else None,
        oracle_size=oracle.size,
        seconds=seconds,
        counterexample=counterexample,
    )


def minimize_counterexample(
    g: Graph,
    run_mode: RunMode,
    classification: Classification,
    oracle_limit: int | None = None,
) -> Graph:
    """
    Greedy shrink: delete vertices, then edges, while the graph stays connected and the
    classification persists.
    """

    def still_fails(candidate: Graph) -> bool:
        if not validate_simple_connected(candidate).ok:
            return False
        outcome = evaluate_instance(candidate, run_mode, oracle_limit=oracle_limit)
        return outcome.classification is classification

    current = g
    shrinking = True
    while shrinking:
        shrinking = False
        for v in range(current.m):
            if current.m == 1:
                break
            candidate = current.induced_subgraph(w for w in range(current.m) if w != v)
            if still_fails(candidate):
                current, shrinking = candidate, True
                break
        if shrinking:
            continue
        for edge in current.sorted_edges():
            candidate = Graph.from_index_pairs(current.names, current.edges - {edge})
            if still_fails(candidate):
                current, shrinking = candidate, True
                break
    return current


def replay_counterexample(path: str | Path, oracle_limit: int | None = None) -> Classification:
    """Re-run a persisted counterexample and return its classification now."""
    record = Counterexample.read(path)
    outcome = evaluate_instance(
        record.graph(), record.run_mode, record.source, record.rng_seed, oracle_limit
    )
    if outcome.classification is None:
        raise OracleLimitError(f"Counterexample at {path} is beyond the oracle limit")
    return outcome.classification


def _evaluate_task(task: tuple[Graph, RunMode, str, int | None, int | None]) -> InstanceOutcome:
    g, run_mode, source, rng_seed, oracle_limit = task
    return evaluate_instance(g, run_mode, source, rng_seed, oracle_limit)


class DifferentialRunner:
    """Runs instances through every mode, persists disagreements and aggregates a report."""

    def __init__(
        self,
        modes: Sequence[RunMode] | None = None,
        out_dir: str | Path | None = None,
        oracle_limit: int | None = None,
        minimize: bool | None = None,
        workers: int = 1,
    ):
        self.modes = list(modes) if modes else default_modes()
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.oracle_limit = oracle_limit
        if minimize is None:
            minimize = bool(get_parameter("harness", "minimize_counterexamples"))
        self.minimize = minimize
        self.workers = workers
        self.outcomes: list[InstanceOutcome] = []

    def _tasks(self, instances: Iterable[Instance], report: RunReport) -> Iterator[tuple]:
        for source, g, rng_seed in instances:
            report.instances[source] = report.instances.get(source, 0) + 1
            for run_mode in self.modes:
                yield g, run_mode, source, rng_seed, self.oracle_limit

    def _persist(self, outcome: InstanceOutcome) -> str | None:
        record = outcome.counterexample
        if record is None or self.out_dir is None:
            return None
        if self.minimize:
            smaller = minimize_counterexample(
                record.graph(), record.run_mode, record.classification, self.oracle_limit
            )
            record = replace(record, minimized_text=to_edgelist(smaller))
        path = record.write(self.out_dir)
        logger.warning(
            "%s under %s (%d vs %d) written to %s",
            record.classification.value,
            record.run_mode.label,
            record.algo_size,
            record.oracle_size,
            path,
        )
        return path.name

    def run(self, instances: Iterable[Instance]) -> RunReport:
        report = RunReport()
        tasks = self._tasks(instances, report)
        if self.workers > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                results: Iterable[InstanceOutcome] = list(
                    pool.map(_evaluate_task, tasks, chunksize=16)
                )
        else:
            results = map(_evaluate_task, tasks)
        for outcome in results:
            self.outcomes.append(outcome)
            report.record(outcome, self._persist(outcome))
        report.instances = dict(sorted(report.instances.items()))
        return report

    def outcomes_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "source": o.source,
                    "m": o.m,
                    "n": o.n,
                    "mode": o.run_mode.label,
                    "classification": o.classification.value if o.classification else "SKIPPED",
                    "algo_size": o.algo_size,
                    "oracle_size": o.oracle_size,
                    "seconds": o.seconds,
                }
                for o in self.outcomes
            ]
        )


def differential_run(
    instances: Iterable[Instance],
    modes: Sequence[RunMode] | None = None,
    out_dir: str | Path | None = None,
    oracle_limit: int | None = None,
    minimize: bool | None = None,
    workers: int = 1,
) -> RunReport:
    """Functional wrapper around DifferentialRunner."""
    runner = DifferentialRunner(modes, out_dir, oracle_limit, minimize, workers)
    return runner.run(instances)
