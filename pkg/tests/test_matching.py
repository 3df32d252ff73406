"""Tests for the maximum-matching lower bound."""

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dire_vertex_cover.graph import Graph
from dire_vertex_cover.harness import enumerate_connected
from dire_vertex_cover.matching import (
    Matching,
    is_matching,
    maximum_matching,
    perturbed_maximum_matching,
)
from dire_vertex_cover.oracle import exact_max_matching_exhaustive

NAMES = [str(i) for i in range(10)]

edge_sets = st.sets(
    st.tuples(st.integers(0, 9), st.integers(0, 9)).filter(lambda e: e[0] != e[1]),
    max_size=30,
)


def networkx_matching_size(g: Graph) -> int:
    reference = nx.Graph()
    reference.add_nodes_from(range(g.m))
    reference.add_edges_from(g.edges)
    return len(nx.max_weight_matching(reference, maxcardinality=True))


class TestMatching:
    def test_edges_must_be_ordered(self):
        with pytest.raises(ValueError, match="smaller, larger"):
            Matching(frozenset({(1, 0)}))

    def test_edges_must_be_disjoint(self):
        with pytest.raises(ValueError, match="shared"):
            Matching.from_pairs([(0, 1), (2, 1)])

    def test_membership_ignores_orientation(self):
        em = Matching.from_pairs([(3, 1)])

        assert (1, 3) in em
        assert (3, 1) in em
        assert (1, 2) not in em
        assert "13" not in em

    def test_matched_with_is_an_involution(self):
        em = Matching.from_pairs([(0, 4), (2, 3)])

        assert em.matched_with == {0: 4, 4: 0, 2: 3, 3: 2}
        assert list(em) == [(0, 4), (2, 3)]


class TestMaximumMatching:
    def test_worked_example(self, worked_example):
        em = maximum_matching(worked_example)

        assert em.sorted_edges() == [(0, 1), (2, 7), (3, 5), (4, 6)]

    def test_small_graphs(self, single_edge, p4, k3, c5):
        assert maximum_matching(single_edge).sorted_edges() == [(0, 1)]
        assert maximum_matching(p4).sorted_edges() == [(0, 1), (2, 3)]
        assert maximum_matching(k3).sorted_edges() == [(0, 1)]
        assert len(maximum_matching(c5)) == 2

    def test_needs_an_augmenting_path(self, make_graph):
        # Greedy takes (0, 2) and leaves 1 and 3 exposed.
        g = make_graph("0 2\n1 2\n0 3\n")

        assert maximum_matching(g).sorted_edges() == [(0, 3), (1, 2)]

    def test_odd_cycle_blossom(self, make_graph):
        # Pentagon 0..4 with pendant vertices 5 (at 2) and 6 (at 4).
        g = make_graph("0 1\n1 2\n2 3\n3 4\n4 0\n2 5\n4 6\n")

        em = maximum_matching(g)

        assert len(em) == 3
        assert is_matching(g, em)

    def test_edgeless_and_disconnected(self, make_graph):
        assert len(maximum_matching(Graph.from_edges(["a", "b"], []))) == 0
        assert len(maximum_matching(make_graph("0 1\n2 3\n3 4\n"))) == 2

    def test_deterministic(self, worked_example):
        assert maximum_matching(worked_example) == maximum_matching(worked_example)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_agrees_with_exhaustive_search(self, m):
        for g in enumerate_connected(m):
            assert len(maximum_matching(g)) == exact_max_matching_exhaustive(g)

    @settings(max_examples=150, deadline=None)
    @given(edge_sets)
    def test_size_matches_networkx(self, pairs):
        g = Graph.from_index_pairs(NAMES, pairs)

        em = maximum_matching(g)

        assert is_matching(g, em)
        assert len(em) == networkx_matching_size(g)


class TestPerturbedMatching:
    def test_identity_perturbation(self, worked_example):
        assert perturbed_maximum_matching(worked_example, 0) == maximum_matching(worked_example)

    @pytest.mark.parametrize("perturbation_id", [1, 2, 3, 7, 11])
    def test_same_size_and_valid(self, worked_example, perturbation_id):
        em = perturbed_maximum_matching(worked_example, perturbation_id)

        assert is_matching(worked_example, em)
        assert len(em) == 4

    def test_deterministic_per_id(self, worked_example):
        assert perturbed_maximum_matching(worked_example, 5) == perturbed_maximum_matching(
            worked_example, 5
        )

    def test_negative_id_rejected(self, p4):
        with pytest.raises(ValueError, match="non-negative"):
            perturbed_maximum_matching(p4, -1)

    @settings(max_examples=60, deadline=None)
    @given(edge_sets, st.integers(1, 1000))
    def test_size_never_changes(self, pairs, perturbation_id):
        g = Graph.from_index_pairs(NAMES, pairs)

        assert len(perturbed_maximum_matching(g, perturbation_id)) == len(maximum_matching(g))


class TestIsMatching:
    def test_examples(self, p4):
        assert is_matching(p4, [(0, 1), (2, 3)])
        assert is_matching(p4, [])
        assert not is_matching(p4, [(0, 1), (1, 2)])
        assert not is_matching(p4, [(0, 2)])
        assert not is_matching(p4, [(1, 1)])
