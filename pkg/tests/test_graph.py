import numpy as np
import pytest

from src.errors import GraphError, LabelCollision
from src.graph import (
    component_count,
    connected_components,
    cyclomatic_number,
    is_connected,
    largest_component,
)
from src.ingestion import graph_from_triples
from src.models import SignedEdge, SignedGraph


def test_signed_edge_validation():
    with pytest.raises(GraphError):
        SignedEdge(1, 1, 1)
    with pytest.raises(GraphError):
        SignedEdge(0, 1, 2)


def test_graph_rejects_parallel_edges_and_duplicate_labels():
    with pytest.raises(GraphError):
        SignedGraph(2, (SignedEdge(0, 1, 1), SignedEdge(1, 0, -1)), ("a", "b"))
    with pytest.raises(LabelCollision):
        SignedGraph(2, (SignedEdge(0, 1, 1),), ("a", "a"))


def test_adjacency_matches_edges(square):
    assert square.n == 4 and square.m == 5
    assert sum(len(row) for row in square.adjacency) == 2 * square.m
    for v, row in enumerate(square.adjacency):
        for w, e in row:
            assert {square.edges[e].u, square.edges[e].v} == {v, w}
    assert square.degrees.tolist() == [2, 3, 3, 2]
    assert square.positive_count + square.negative_count == square.m


def test_cyclomatic_number(square, triangle, k5):
    assert cyclomatic_number(square) == 2
    assert cyclomatic_number(triangle) == 1
    assert cyclomatic_number(k5) == 6


def test_components_are_ordered_and_reindexed():
    g = graph_from_triples([("p", "q", 1), (1, 2, -1), (2, 3, 1), ("z", "y", 1)])
    parts = connected_components(g)
    assert [c.n for c in parts] == [3, 2, 2]
    assert parts[0].labels == ("1", "2", "3")
    # ties broken by smallest original label
    assert parts[1].labels == ("p", "q")
    assert parts[2].labels == ("y", "z")
    assert [(e.u, e.v, e.sign) for e in parts[0].edges] == [(0, 1, -1), (1, 2, 1)]
    assert largest_component(g).labels == ("1", "2", "3")
    assert component_count(g) == 3
    assert cyclomatic_number(g) == 0


def test_is_connected_with_edge_mask(square):
    assert is_connected(square)
    mask = np.ones(square.m, dtype=bool)
    mask[square.edge_between(0, 1)] = False  # bl-br
    assert is_connected(square, mask)
    mask[square.edge_between(1, 2)] = False  # tl-br
    mask[square.edge_between(1, 3)] = False  # tr-br
    assert not is_connected(square, mask)


def test_subgraph_and_with_signs(square):
    sub = square.subgraph([0, 2, 3])
    assert sub.labels == ("bl", "tl", "tr")
    assert sub.m == 2
    flipped = square.with_signs([-s for s in square.edge_sign])
    assert flipped.negative_count == square.positive_count
    assert flipped.fingerprint != square.fingerprint
