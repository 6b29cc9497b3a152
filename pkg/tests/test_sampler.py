import numpy as np
import pytest

from src.errors import Disconnected, TooLarge
from src.graph import is_connected
from src.ingestion import graph_from_triples
from src.models import SamplerKind
from src.oracle import enumerate_spanning_trees
from src.sampler import count_spanning_trees, sample_tree, sample_trees, tree_rng

ALL_KINDS = list(SamplerKind)


def assert_spanning_tree(g, tree):
    ids = tree.edge_ids()
    assert len(ids) == g.n - 1
    mask = np.zeros(g.m, dtype=bool)
    mask[list(ids)] = True
    assert is_connected(g, mask)
    # path signs multiply along parent links
    for v in range(g.n):
        if v == tree.root:
            assert tree.parent[v] == -1 and tree.path_sign[v] == 1
        else:
            e = tree.parent_edge[v]
            assert tree.path_sign[v] == tree.path_sign[tree.parent[v]] * g.edge_sign[e]


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_samplers_produce_spanning_trees(kind, random_graphs):
    for g in random_graphs[:30]:
        for index in range(5):
            assert_spanning_tree(g, sample_tree(g, kind, 7, index))


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_sampling_is_deterministic_per_index(kind, square):
    a = [t.edge_ids() for t in sample_trees(square, kind, 42, 0, 20)]
    b = [sample_tree(square, kind, 42, i).edge_ids() for i in reversed(range(20))]
    assert a == b[::-1]
    c = [t.edge_ids() for t in sample_trees(square, kind, 43, 0, 20)]
    assert a != c


def test_tree_rng_streams_are_independent():
    assert tree_rng(1, 0).random() != tree_rng(1, 1).random()
    assert tree_rng(-1, 5).random() == tree_rng(2**64 - 1, 5).random()


def test_random_mst_reaches_every_tree(square):
    all_trees = {t.edge_ids() for t in enumerate_spanning_trees(square)}
    seen = {t.edge_ids() for t in sample_trees(square, SamplerKind.RANDOM_MST, 3, 0, 400)}
    assert seen == all_trees


def test_bfs_and_dfs_shapes_on_complete_graph():
    k6 = graph_from_triples([(i, j, 1) for i in range(6) for j in range(i + 1, 6)])
    bfs = [t.leaf_count() for t in sample_trees(k6, SamplerKind.BREADTH_FIRST, 0, 0, 200)]
    dfs = [t.leaf_count() for t in sample_trees(k6, SamplerKind.DEPTH_FIRST, 0, 0, 200)]
    # breadth-first from any root is a star, depth-first a Hamiltonian path
    assert set(bfs) == {5}
    assert set(dfs) == {2}


def grid(rows, cols):
    triples = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                triples.append((f"{r}.{c}", f"{r}.{c + 1}", 1))
            if r + 1 < rows:
                triples.append((f"{r}.{c}", f"{r + 1}.{c}", -1))
    return graph_from_triples(triples)


def wheel(spokes):
    rim = [(i, i % spokes + 1, 1) for i in range(1, spokes + 1)]
    return graph_from_triples(rim + [(0, i, -1) for i in range(1, spokes + 1)])


@pytest.mark.parametrize(
    "g",
    [
        grid(3, 3),
        wheel(6),
        graph_from_triples([(f"a{i}", f"b{j}", 1) for i in range(3) for j in range(3)]),
    ],
    ids=["grid", "wheel", "k33"],
)
def test_bfs_trees_have_more_leaves_than_dfs_on_average(g):
    draws = 1000
    bfs = np.mean([t.leaf_count() for t in sample_trees(g, SamplerKind.BREADTH_FIRST, 5, 0, draws)])
    dfs = np.mean([t.leaf_count() for t in sample_trees(g, SamplerKind.DEPTH_FIRST, 5, 0, draws)])
    assert bfs >= 1.0 * dfs


def test_random_mst_support_within_enumeration(eight_vertex_graphs):
    for g in eight_vertex_graphs:
        trees = {t.edge_ids() for t in enumerate_spanning_trees(g)}
        for tree in sample_trees(g, SamplerKind.RANDOM_MST, 13, 0, 50):
            assert tree.edge_ids() in trees


def test_random_mst_on_k5_stays_among_enumerated_trees(k5):
    trees = {t.edge_ids() for t in enumerate_spanning_trees(k5)}
    assert len(trees) == 125
    seen = {t.edge_ids() for t in sample_trees(k5, SamplerKind.RANDOM_MST, 21, 0, 2000)}
    assert seen <= trees
    assert len(seen) > 50


def test_bfs_roots_vary(square):
    roots = {t.root for t in sample_trees(square, SamplerKind.BREADTH_FIRST, 9, 0, 200)}
    assert roots == set(range(square.n))


def test_disconnected_graph_raises():
    g = graph_from_triples([(1, 2, 1), (3, 4, 1)])
    for kind in ALL_KINDS:
        with pytest.raises(Disconnected):
            sample_tree(g, kind, 0, 0)
    with pytest.raises(Disconnected):
        count_spanning_trees(g)


def test_kirchhoff_counts(square, triangle, k5):
    assert count_spanning_trees(square) == 8
    assert count_spanning_trees(triangle) == 3
    assert count_spanning_trees(k5) == 125
    k8 = graph_from_triples([(i, j, 1) for i in range(8) for j in range(i + 1, 8)])
    assert count_spanning_trees(k8) == 8**6


def test_kirchhoff_matches_enumeration(random_graphs):
    for g in random_graphs:
        assert len(enumerate_spanning_trees(g)) == count_spanning_trees(g)


def test_count_respects_vertex_cap(k5):
    assert count_spanning_trees(k5, max_vertices=5) == 125
    with pytest.raises(TooLarge):
        count_spanning_trees(k5, max_vertices=4)


def test_kirchhoff_beyond_machine_integers():
    # Cayley: K_n has n^(n-2) trees
    k20 = graph_from_triples([(i, j, 1) for i in range(20) for j in range(i + 1, 20)])
    assert count_spanning_trees(k20) == 20**18


def test_tree_has_one_tree():
    path = graph_from_triples([(1, 2, 1), (2, 3, -1), (3, 4, 1)])
    assert count_spanning_trees(path) == 1
