"""Tests for the level-guided maximal matching and the represents table."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dire_vertex_cover.graph import BfsLevels, bfs_levels
from dire_vertex_cover.harness import gen_random_connected
from dire_vertex_cover.matching import Matching, maximum_matching
from dire_vertex_cover.maximal_matching import (
    EndpointStatus,
    RepresentsTable,
    guided_maximal_matching,
    matched_edges,
)


def build_table(g, seed=0, mode="tier-first", on_event=None):
    return guided_maximal_matching(
        g, maximum_matching(g), bfs_levels(g, seed), mode=mode, on_event=on_event
    )


class TestWorkedExample:
    def test_rows(self, worked_example):
        table = build_table(worked_example)

        assert table.to_json() == [
            {"node1": "0", "list1": ["1"], "node2": "1", "list2": ["0", "2", "3"]},
            {"node1": "2", "list1": ["4", "7"], "node2": "7", "list2": ["2"]},
            {"node1": "3", "list1": ["5", "8"], "node2": "5", "list2": ["3", "6"]},
            {"node1": "4", "list1": ["6"], "node2": "6", "list2": ["4"]},
        ]

    def test_every_row_comes_from_the_maximum_matching(self, worked_example):
        events = []
        build_table(worked_example, on_event=lambda kind, payload: events.append((kind, payload)))

        selected = [payload for kind, payload in events if kind == "edge_selected"]
        assert [p["edge"] for p in selected] == [["0", "1"], ["2", "7"], ["3", "5"], ["4", "6"]]
        assert {p["tier"] for p in selected} == {"T3"}
        assert [p["level"] for p in selected] == [0, 2, 2, 3]

    def test_row_appended_events_follow_selection(self, worked_example):
        kinds = []
        build_table(worked_example, on_event=lambda kind, payload: kinds.append(kind))

        assert kinds == ["edge_selected", "row_appended"] * 4

    def test_all_endpoints_start_active(self, worked_example):
        table = build_table(worked_example)

        assert table.endpoints == frozenset({0, 1, 2, 7, 3, 5, 4, 6})
        assert list(table.endpoints_in_order()) == [0, 1, 2, 7, 3, 5, 4, 6]
        assert all(table.status(v) is EndpointStatus.ACTIVE for v in table.endpoints)
        assert table.cover == [] and table.removed == []


class TestSmallGraphs:
    def test_path(self, p4):
        table = build_table(p4)

        assert [(r.node1, r.list1, r.node2, r.list2) for r in table.rows] == [
            (0, [1], 1, [0, 2]),
            (2, [3], 3, [2]),
        ]

    def test_triangle_single_row(self, k3):
        table = build_table(k3)

        rows = [(r.node1, r.list1, r.node2, r.list2) for r in table.rows]

        assert rows == [(0, [1, 2], 1, [0, 2])]

    def test_same_level_matching_edge_is_tier_one(self, make_graph):
        g = make_graph("0 1\n0 2\n1 2\n2 3\n")
        tiers = []

        build_table(
            g,
            seed=3,
            on_event=lambda kind, payload: tiers.append(payload["tier"])
            if kind == "edge_selected"
            else None,
        )

        assert tiers == ["T3", "T1"]


class TestSelectionModes:
    @pytest.fixture
    def diverging(self, make_graph):
        g = make_graph("0 1\n0 2\n0 5\n1 3\n2 4\n3 6\n")
        em = Matching.from_pairs([(0, 5), (2, 4), (3, 6)])
        return g, em, bfs_levels(g, 0)

    def test_tier_first_prefers_matching_edges_across_the_level(self, diverging):
        g, em, levels = diverging

        table = guided_maximal_matching(g, em, levels, mode="tier-first")

        assert [row.node1 for row in table.rows] == [0, 2, 1]

    def test_vertex_first_serves_the_smallest_vertex(self, diverging):
        g, em, levels = diverging

        table = guided_maximal_matching(g, em, levels, mode="vertex-first")

        assert [row.node1 for row in table.rows] == [0, 1, 2]

    def test_unknown_mode(self, p4):
        with pytest.raises(ValueError, match="Unknown selection mode"):
            build_table(p4, mode="edge-first")


class TestPreconditions:
    def test_rejects_a_non_matching(self, p4):
        with pytest.raises(ValueError, match="not a matching"):
            guided_maximal_matching(p4, Matching.from_pairs([(0, 2)]), bfs_levels(p4, 0))

    def test_rejects_levels_of_another_graph(self, p4, k3):
        with pytest.raises(ValueError, match="BFS levels"):
            guided_maximal_matching(p4, maximum_matching(p4), bfs_levels(k3, 0))

    def test_rejects_edges_spanning_two_levels(self, p4):
        levels = BfsLevels(seed=0, levels=((0, 2), (1,), (3,)), level_of=(0, 1, 0, 2))

        with pytest.raises(ValueError, match="more than one BFS level"):
            guided_maximal_matching(p4, maximum_matching(p4), levels)

    def test_append_row_rejects_reused_endpoints(self, p4):
        table = RepresentsTable(graph=p4)
        table.append_row(0, 1, [1], [0, 2])

        with pytest.raises(ValueError, match="reuses"):
            table.append_row(1, 2, [2], [1, 3])


class TestInvariants:
    @settings(max_examples=100, deadline=None)
    @given(
        st.integers(1, 12),
        st.floats(0.0, 0.7),
        st.integers(0, 2**32 - 1),
        st.sampled_from(["tier-first", "vertex-first"]),
    )
    def test_maximal_matching_whose_endpoints_cover(self, m, p, rng_seed, mode):
        g = gen_random_connected(m, p, rng_seed)

        table = build_table(g, mode=mode)
        matching = matched_edges(table)

        assert len(matching) == len(table.rows)
        for u, v in g.edges:
            assert u in table.endpoints or v in table.endpoints
        for v in range(g.m):
            if v not in table.endpoints:
                assert all(w in table.endpoints for w in g.adjacency[v])
        for row in table.rows:
            assert row.node2 in row.list1 and row.node1 in row.list2
            assert all(g.has_edge(row.node1, w) for w in row.list1)
