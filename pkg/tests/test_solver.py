"""Tests for the seed loop, the decision form and event traces."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dire_vertex_cover.graph import Graph, is_vertex_cover
from dire_vertex_cover.harness import gen_random_connected
from dire_vertex_cover.local_minimization import LocalMinimizationError
from dire_vertex_cover.oracle import exact_mvc
from dire_vertex_cover.solver import (
    TRACE_KINDS,
    SolverConfig,
    TraceEvent,
    decide,
    events_to_jsonl,
    replay_trace,
    solve,
    trace,
)


@pytest.fixture
def config():
    return SolverConfig()


class TestSolve:
    def test_worked_example(self, worked_example, config):
        result = solve(worked_example, config)

        assert result.cover == (1, 2, 3, 6)
        assert result.size == 4
        assert result.seed == 0
        assert result.matching_lower_bound == 4
        assert result.verified_cover
        assert result.optimal_certified
        assert result.freeze_order == (3, 1, 2, 6)
        assert result.diagnostics == ()
        assert result.cover_names(worked_example) == ["1", "2", "3", "6"]

    def test_small_graphs(self, single_edge, p4, k3, config):
        assert solve(single_edge, config).cover == (0,)
        assert solve(p4, config).cover == (1, 2)
        assert solve(k3, config).cover == (0, 1)

    def test_single_vertex(self, config):
        result = solve(Graph.from_edges(["v"], []), config)

        assert result.size == 0
        assert result.optimal_certified

    def test_empty_graph(self, config):
        result = solve(Graph.from_edges([], []), config)

        assert result.size == 0
        assert result.seed is None

    def test_disconnected_graph_is_solved_per_component(self, make_graph, config):
        g = make_graph("0 1\n2 3\n3 4\n")

        result = solve(g, config)

        assert result.cover == (0, 3)
        assert result.seed is None
        assert result.matching_lower_bound == 2
        assert result.component_seeds == (0, 2)

    def test_pinned_seed(self, worked_example, config):
        result = solve(worked_example, config, only_seed="8")

        assert result.seed == 8
        assert is_vertex_cover(worked_example, result.cover)
        assert result.size >= 4

    def test_pinned_seed_out_of_range(self, p4, config):
        with pytest.raises(ValueError, match="out of range"):
            solve(p4, config, only_seed=7)

    def test_without_early_exit_every_seed_runs(self, worked_example):
        result = solve(worked_example, SolverConfig(early_exit=False))

        assert result.size == 4
        assert result.seed == 0

    def test_vertex_first_mode(self, worked_example):
        result = solve(worked_example, SolverConfig(mode="vertex-first"))

        assert is_vertex_cover(worked_example, result.cover)
        assert result.size >= 4

    def test_failing_seed_is_recorded_and_skipped(self, worked_example, config, mocker):
        from dire_vertex_cover import solver

        original = solver.local_minimization
        calls = []

        def flaky(table):
            calls.append(table)
            if len(calls) == 1:
                raise LocalMinimizationError("lists-not-mutual", 0)
            return original(table)

        mocker.patch("dire_vertex_cover.solver.local_minimization", side_effect=flaky)

        result = solve(worked_example, config)

        assert result.seed != 0
        assert result.diagnostics[0].kind == "stage3-assert"
        assert result.diagnostics[0].seed == 0
        assert is_vertex_cover(worked_example, result.cover)

    def test_no_verified_seed_raises(self, p4, config, mocker):
        mocker.patch(
            "dire_vertex_cover.solver.local_minimization",
            side_effect=LocalMinimizationError("unexpected-statuses", 0),
        )

        with pytest.raises(RuntimeError, match="No BFS seed"):
            solve(p4, config)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 10), st.floats(0.0, 0.6), st.integers(0, 2**32 - 1))
    def test_sandwiched_between_matching_and_oracle(self, m, p, rng_seed):
        g = gen_random_connected(m, p, rng_seed)

        result = solve(g, SolverConfig())

        assert is_vertex_cover(g, result.cover)
        assert result.matching_lower_bound <= exact_mvc(g).size <= result.size
        assert result.size <= 2 * result.matching_lower_bound


class TestSolverConfig:
    def test_unknown_mode(self):
        with pytest.raises(ValueError, match="Unknown selection mode"):
            SolverConfig(mode="random")

    def test_negative_perturbation(self):
        with pytest.raises(ValueError, match="non-negative"):
            SolverConfig(matching_perturbation=-1)

    def test_from_config_ignores_missing_overrides(self):
        config = SolverConfig.from_config(mode=None, matching_perturbation=3)

        assert config.matching_perturbation == 3
        assert config.mode in ("tier-first", "vertex-first")


class TestDecide:
    def test_yes_with_witness(self, worked_example, config):
        decision = decide(worked_example, 4, config)

        assert decision.answer
        assert decision.reason == "witness"
        assert decision.witness.size <= 4
        assert is_vertex_cover(worked_example, decision.witness.cover)

    def test_no_from_matching_bound(self, worked_example, config):
        decision = decide(worked_example, 3, config)

        assert not decision.answer
        assert decision.reason == "matching-bound"
        assert decision.witness is None

    def test_single_edge(self, single_edge, config):
        assert not decide(single_edge, 0, config).answer
        assert decide(single_edge, 1, config).answer

    def test_no_after_exhausting_seeds(self, k3, config):
        decision = decide(k3, 1, config)

        assert not decision.answer
        assert decision.reason == "exhausted"

    def test_disconnected(self, make_graph, config):
        g = make_graph("0 1\n2 3\n3 4\n")

        assert decide(g, 2, config).answer
        assert decide(g, 1, config).reason == "matching-bound"

    def test_negative_k(self, p4, config):
        with pytest.raises(ValueError, match="non-negative"):
            decide(p4, -1, config)

    def test_empty_graph(self, config):
        assert decide(Graph.from_edges([], []), 0, config).answer

    @settings(max_examples=80, deadline=None)
    @given(
        st.integers(1, 10), st.floats(0.0, 0.6), st.integers(0, 2**32 - 1), st.integers(0, 10)
    )
    def test_agrees_with_solve(self, m, p, rng_seed, k):
        g = gen_random_connected(m, p, rng_seed)
        config = SolverConfig()

        assert decide(g, k, config).answer == (solve(g, config).size <= k)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), min_size=1, max_size=10))
    def test_agrees_with_solve_on_disconnected_graphs(self, pairs):
        names = [str(i) for i in range(8)]
        edges = sorted({(min(e), max(e)) for e in pairs if e[0] != e[1]})
        g = Graph.from_index_pairs(names, edges)
        config = SolverConfig()
        size = solve(g, config).size

        for k in range(g.m + 1):
            assert decide(g, k, config).answer == (size <= k)


class TestTrace:
    def test_worked_example_events(self, worked_example, config):
        events = trace(worked_example, 0, config)

        assert events[0].kind == "phase_start"
        assert events[-1].kind == "final"
        assert {event.kind for event in events} <= set(TRACE_KINDS)
        assert all(event.seed == "0" for event in events)

        selected = [e.payload["edge"] for e in events if e.kind == "edge_selected"]
        frozen = [e.payload["vertex"] for e in events if e.kind == "frozen"]
        removed = [e.payload["vertex"] for e in events if e.kind == "removed"]
        assert selected == [["0", "1"], ["2", "7"], ["3", "5"], ["4", "6"]]
        assert frozen == ["3", "1", "2", "6"]
        assert removed == ["0", "7", "4", "5"]
        assert events[-1].payload == {
            "cover": ["1", "2", "3", "6"],
            "size": 4,
            "optimal_certified": True,
        }

    def test_phase_order(self, p4, config):
        phases = [e.payload["phase"] for e in trace(p4, 0, config) if e.kind == "phase_start"]

        assert phases == ["matching", "levels", "maximal-matching", "local-minimization"]

    def test_single_edge(self, single_edge, config):
        kinds = [e.kind for e in trace(single_edge, 0, config)]

        assert kinds.count("edge_selected") == 1
        assert kinds.count("frozen") == 1
        assert kinds.count("removed") == 1

    def test_seed_by_name(self, p4, config):
        events = trace(p4, "2", config)

        assert events[0].seed == "2"

    def test_disconnected_graph_traces_one_component(self, make_graph, config):
        events = trace(make_graph("0 1\n2 3\n3 4\n"), "3", config)

        assert events[-1].payload["cover"] == ["3"]

    def test_deterministic(self, worked_example, config):
        first = events_to_jsonl(trace(worked_example, 0, config))
        second = events_to_jsonl(trace(worked_example, 0, config))

        assert first == second

    def test_jsonl_lines_parse(self, p4, config):
        lines = events_to_jsonl(trace(p4, 0, config)).splitlines()

        decoded = [json.loads(line) for line in lines]
        assert all(set(event) == {"kind", "seed", "payload"} for event in decoded)


class TestReplayTrace:
    def test_rebuilds_the_cover(self, worked_example, config):
        assert replay_trace(trace(worked_example, 0, config)) == ["1", "2", "3", "6"]

    def test_accepts_decoded_json(self, worked_example, config):
        lines = events_to_jsonl(trace(worked_example, 0, config)).splitlines()

        assert replay_trace(json.loads(line) for line in lines) == ["1", "2", "3", "6"]

    def test_rejects_a_tampered_final_event(self, p4, config):
        events = trace(p4, 0, config)
        events[-1] = TraceEvent("final", "0", {"cover": ["0"], "size": 1})

        with pytest.raises(ValueError, match="disagrees"):
            replay_trace(events)

    def test_rejects_unknown_vertices(self):
        with pytest.raises(ValueError, match="before being appended"):
            replay_trace([TraceEvent("frozen", "0", {"vertex": "9"})])

    def test_rejects_double_status_change(self):
        events = [
            TraceEvent("row_appended", "0", {"node1": "0", "node2": "1"}),
            TraceEvent("frozen", "0", {"vertex": "0"}),
            TraceEvent("removed", "0", {"vertex": "0"}),
        ]

        with pytest.raises(ValueError, match="twice"):
            replay_trace(events)
