import numpy as np
import pytest

from src.errors import TreeMismatch
from src.models import (
    BalancedState,
    CloudState,
    FrustrationCloud,
    SamplerKind,
    SpanningTree,
    SymmetrizationPolicy,
    TieAgreement,
    label_sort_key,
)


def test_label_sort_key_orders_numbers_before_text():
    labels = ["b", "10", "2", "a", "007"]
    assert sorted(labels, key=label_sort_key) == ["2", "007", "10", "a", "b"]


@pytest.mark.parametrize(
    "text, expected",
    [
        ("bfs", SamplerKind.BREADTH_FIRST),
        ("Breadth-First", SamplerKind.BREADTH_FIRST),
        ("random_mst", SamplerKind.RANDOM_MST),
        ("mst", SamplerKind.RANDOM_MST),
        ("DEPTH_FIRST", SamplerKind.DEPTH_FIRST),
    ],
)
def test_sampler_kind_parse(text, expected):
    assert SamplerKind.parse(text) is expected


def test_enum_parse_rejects_unknown():
    with pytest.raises(ValueError):
        SymmetrizationPolicy.parse("mean")
    assert TieAgreement.parse("zero_cut") is TieAgreement.ZERO_CUT


def test_balanced_state_key_round_trip():
    side = np.array([0, 1, 1, 0, 1, 0, 0, 1, 1], dtype=np.uint8)
    state = BalancedState.from_side(side, [4, 2])
    assert state.flipped_edges.tolist() == [2, 4]
    assert np.array_equal(BalancedState.side_from_key(state.key, 9), side)
    assert state.side_string() == "011010011"
    assert state.majority_size == 5


def test_spanning_tree_from_edges(square):
    tree = SpanningTree.from_edges(square, [0, 1, 3], root=0)
    assert tree.edge_ids() == frozenset({0, 1, 3})
    assert tree.edge_mask(square.m).tolist() == [True, True, False, True, False]
    assert tree.parent[0] == -1
    with pytest.raises(TreeMismatch):
        # bl-br, bl-tl, br-tl close a triangle
        SpanningTree.from_edges(square, [0, 1, 2])


def test_cloud_properties():
    states = (CloudState((0, 1), 2, 1, 1), CloudState((0, 0), 1, 0, 2))
    cloud = FrustrationCloud(states, 3, 1)
    assert cloud.size == 2
    assert cloud.weights == [2, 1]
    assert cloud.min_distance == 0
    assert states[0].side_string() == "01"
