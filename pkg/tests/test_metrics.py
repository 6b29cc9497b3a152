from fractions import Fraction as F

import numpy as np
import pytest

from src.balance import balance_with_tree
from src.errors import EmptyAccumulator, GraphMismatch, MissingTieBreak, ZeroDegree
from src.ingestion import graph_from_triples
from src.metrics import (
    ConsensusAccumulator,
    accumulate,
    agreement,
    build_report,
    controversy,
    influence,
    status,
    status_from_states,
    vertical_status,
    vertical_status_from_states,
)
from src.models import (
    BalancedState,
    Provenance,
    SignedEdge,
    SignedGraph,
    TieAgreement,
)
from src.oracle import enumerate_spanning_trees


def exhaustive_states(g):
    return [balance_with_tree(g, tree) for tree in enumerate_spanning_trees(g)]


def exhaustive(g, tie_break=None, tie_agreement=TieAgreement.ZERO_CUT):
    acc = ConsensusAccumulator.for_graph(g, tie_break, tie_agreement)
    for state in exhaustive_states(g):
        accumulate(acc, state)
    return acc


def by_label(g, values):
    return {g.labels[i]: v for i, v in enumerate(values)}


def edge_values(g, values):
    return {frozenset((g.labels[e.u], g.labels[e.v])): v for e, v in zip(g.edges, values)}


class TestSquareExample:
    def test_status_and_controversy(self, square):
        acc = exhaustive(square)
        assert acc.trees_seen == 8
        assert by_label(square, status(acc)) == {
            "tl": F(13, 16),
            "tr": F(11, 16),
            "bl": F(13, 16),
            "br": F(7, 16),
        }
        assert controversy(acc) == F(11, 16)
        assert acc.tie_count == 3
        assert sorted(acc.state_weights.values()) == [1, 1, 3, 3]

    def test_agreement_and_influence(self, square):
        acc = exhaustive(square)
        agree = edge_values(square, agreement(acc))
        assert agree == {
            frozenset(("tl", "tr")): F(11, 16),
            frozenset(("tr", "br")): F(1, 8),
            frozenset(("br", "bl")): F(7, 16),
            frozenset(("bl", "tl")): F(5, 8),
            frozenset(("tl", "br")): F(1, 4),
        }
        assert by_label(square, influence(square, agreement(acc))) == {
            "tl": F(25, 48),
            "tr": F(13, 32),
            "br": F(13, 48),
            "bl": F(17, 32),
        }
        raw = by_label(square, influence(square, agreement(acc), normalized=False))
        assert raw["tl"] == F(25, 16)

    def test_half_tie_agreement(self, square):
        agree = edge_values(square, agreement(exhaustive(square, None, TieAgreement.HALF)))
        assert agree[frozenset(("tr", "br"))] == F(5, 16)
        assert agree[frozenset(("bl", "tl"))] == F(13, 16)
        assert agree[frozenset(("tl", "br"))] == F(7, 16)
        assert agree[frozenset(("tl", "tr"))] == F(11, 16)

    @pytest.mark.parametrize(
        "t, expected",
        [
            ("tl", {"tl": F(1), "tr": F(7, 8), "br": F(1, 4), "bl": F(5, 8)}),
            ("br", {"tl": F(5, 8), "tr": F(1, 2), "br": F(5, 8), "bl": F(1)}),
            ("bl", {"tl": F(5, 8), "tr": F(1, 2), "br": F(5, 8), "bl": F(1)}),
        ],
    )
    def test_vertical_status(self, square, t, expected):
        acc = exhaustive(square, tie_break=square.vertex_of(t))
        vertical = vertical_status(acc)
        assert by_label(square, vertical) == expected
        assert sum(vertical) / square.n == controversy(acc) == F(11, 16)
        assert vertical_status_from_states(acc, square.vertex_of(t)) == vertical


def test_half_unit_identities(random_graphs):
    for g in random_graphs:
        states = exhaustive_states(g)
        acc = ConsensusAccumulator.for_graph(g)
        for s in states:
            acc.add(s)
        vertex_units = 0
        edge_units = 0
        for s in states:
            side = s.side.astype(bool)
            same = side[g.edge_u] == side[g.edge_v]
            if s.is_tie:
                vertex_units += g.n
                edge_units += int(same.sum())
            else:
                major = 2 * int(side.sum()) > g.n
                vertex_units += 2 * s.majority_size
                edge_units += 2 * int((same & (side[g.edge_u] == major)).sum())
        assert int(acc.vertex_tally.sum()) == vertex_units
        assert int(acc.edge_tally.sum()) == edge_units


def test_bounds_and_cone(random_graphs):
    for g in random_graphs:
        acc = exhaustive(g)
        c = controversy(acc)
        assert F(1, 2) <= c <= 1
        stat = status(acc)
        for v, value in enumerate(influence(g, agreement(acc))):
            assert 0 <= value <= stat[v] <= 1


def test_controversy_extremes():
    agreeing = graph_from_triples([(1, 2, 1), (2, 3, 1), (1, 3, 1)])
    assert controversy(exhaustive(agreeing)) == 1
    split = graph_from_triples([(1, 2, 1), (3, 4, 1), (2, 3, -1), (1, 4, -1)])
    acc = exhaustive(split)
    assert acc.tie_count == acc.trees_seen
    assert controversy(acc) == F(1, 2)


def test_pendant_vertices():
    g = graph_from_triples(
        [("a", "b", 1), ("b", "c", 1), ("a", "c", -1), ("a", "p", 1), ("c", "q", -1)]
    )
    acc = exhaustive(g)
    stat = by_label(g, status(acc))
    infl = by_label(g, influence(g, agreement(acc)))
    assert infl["p"] == stat["p"]
    assert infl["q"] == 0


def test_conservation_for_every_tie_break(random_graphs):
    for g in random_graphs:
        acc = exhaustive(g)
        mean = controversy(acc)
        verticals = [vertical_status_from_states(acc, t) for t in range(g.n)]
        for t, vertical in enumerate(verticals):
            assert sum(vertical) / g.n == mean
        # vertical status of v peaks when v breaks the ties
        for v in range(g.n):
            assert verticals[v][v] == max(vertical[v] for vertical in verticals)


def test_no_ties_means_vertical_equals_status(triangle):
    acc = exhaustive(triangle, tie_break=1)
    assert acc.tie_count == 0
    assert vertical_status(acc) == status(acc)


def test_status_from_states(random_graphs):
    for g in random_graphs[:40]:
        acc = exhaustive(g)
        assert status_from_states(acc) == status(acc)


def test_merge_is_associative_under_random_splits(random_graphs):
    rng = np.random.default_rng(5)
    for g in random_graphs[:40]:
        states = exhaustive_states(g)
        cuts = sorted(rng.integers(0, len(states) + 1, size=2).tolist())
        parts = []
        for chunk in (states[: cuts[0]], states[cuts[0] : cuts[1]], states[cuts[1] :]):
            acc = ConsensusAccumulator.for_graph(g, 0)
            for s in chunk:
                acc.add(s)
            parts.append(acc)
        left = parts[0].merge(parts[1]).merge(parts[2])
        right = parts[0].merge(parts[1].merge(parts[2]))
        swapped = parts[2].merge(parts[0]).merge(parts[1])
        whole = exhaustive(g, 0)
        for merged in (left, right, swapped):
            assert np.array_equal(merged.vertex_tally, whole.vertex_tally)
            assert np.array_equal(merged.edge_tally, whole.edge_tally)
            assert np.array_equal(merged.vertical_tally, whole.vertical_tally)
            assert merged.state_weights == whole.state_weights
            assert merged.tie_count == whole.tie_count
            assert merged.trees_seen == whole.trees_seen


def test_merge_rejects_other_graph(square, triangle):
    with pytest.raises(GraphMismatch):
        ConsensusAccumulator.for_graph(square).merge(ConsensusAccumulator.for_graph(triangle))
    flipped = square.with_signs([1] * square.m)
    with pytest.raises(GraphMismatch):
        ConsensusAccumulator.for_graph(square).merge(ConsensusAccumulator.for_graph(flipped))


def test_state_size_checked(square):
    acc = ConsensusAccumulator.for_graph(square)
    with pytest.raises(GraphMismatch):
        acc.add(BalancedState.from_side(np.zeros(3, dtype=np.uint8)))


def test_empty_and_missing_tie_break(square):
    acc = ConsensusAccumulator.for_graph(square)
    for fn in (status, agreement, controversy, vertical_status):
        with pytest.raises(EmptyAccumulator):
            fn(acc)
    acc.add(BalancedState.from_side(np.zeros(4, dtype=np.uint8)))
    with pytest.raises(MissingTieBreak):
        vertical_status(acc)
    with pytest.raises(MissingTieBreak):
        ConsensusAccumulator.for_graph(square, tie_break=9)


def test_zero_degree_influence():
    g = SignedGraph(3, (SignedEdge(0, 1, 1),), ("a", "b", "c"))
    with pytest.raises(ZeroDegree):
        influence(g, [F(1)])
    assert influence(g, [F(1)], normalized=False) == (F(1), F(1), F(0))


def test_build_report(square):
    acc = exhaustive(square, tie_break=square.vertex_of("tl"))
    prov = Provenance(sampler="bfs", seed=1, trees=8, tie_break="tl")
    report = build_report(square, acc, prov)
    assert report.controversy == F(11, 16)
    assert report.distinct_states == 4
    assert report.trees_seen == 8
    assert report.vertical_status is not None
    with pytest.raises(GraphMismatch):
        build_report(square.with_signs([1] * square.m), acc, prov)
