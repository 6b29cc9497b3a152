"""Exhaustive reference computations for small graphs.

Everything here enumerates: all spanning trees, all balanced states, every
tie-break choice. Results are exact and serve as the ground truth the sampled
pipeline is checked against.
"""

from __future__ import annotations

from collections import Counter, deque
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .balance import balance_with_tree
from .errors import (
    CloudMismatch,
    Disconnected,
    EdgeInTree,
    MissingTieBreak,
    TooLarge,
    TooManyTrees,
)
from .graph import cyclomatic_number, is_connected
from .logger import get_logger
from .models import (
    BalancedState,
    CloudState,
    FrustrationCloud,
    MetricsReport,
    Provenance,
    SignedGraph,
    SpanningTree,
    TieAgreement,
)
from .sampler import count_spanning_trees

logger = get_logger(__name__)

DEFAULT_MAX_TREES = 10**6
DEFAULT_MAX_VERTICES = 20
_CHUNK = 1 << 15


class SigningLattice:
    """Signings of one graph as bitmasks of negative edges"""

    def __init__(self, graph: SignedGraph):
        self.graph = graph
        self.base = self.mask_of_signs(graph.edge_sign)

    @property
    def m(self) -> int:
        return self.graph.m

    @staticmethod
    def mask_of_signs(signs: Sequence[int]) -> int:
        mask = 0
        for e, s in enumerate(signs):
            if int(s) < 0:
                mask |= 1 << e
        return mask

    def mask_of_side(self, side: Sequence[int]) -> int:
        """Signing induced by a bipartition: cut edges negative"""
        mask = 0
        for e in range(self.m):
            if side[int(self.graph.edge_u[e])] != side[int(self.graph.edge_v[e])]:
                mask |= 1 << e
        return mask

    @staticmethod
    def distance(a: int, b: int) -> int:
        return (a ^ b).bit_count()

    def distance_to_side(self, side: Sequence[int]) -> int:
        return self.distance(self.base, self.mask_of_side(side))


def _check_trees(g: SignedGraph, cap: int) -> int:
    if not is_connected(g):
        raise Disconnected("Exhaustive computations need a connected graph")
    total = count_spanning_trees(g)
    if total > cap:
        raise TooManyTrees(f"Graph has {total} spanning trees, cap is {cap}")
    return total


def enumerate_spanning_trees(g: SignedGraph, cap: int = DEFAULT_MAX_TREES) -> List[SpanningTree]:
    """Every spanning tree rooted at vertex 0, in lexicographic order of edge indices"""
    expected = _check_trees(g, cap)
    trees: List[SpanningTree] = []
    if g.n == 1:
        return [SpanningTree.from_edges(g, ())]
    keep = np.ones(g.m, dtype=bool)
    chosen: List[int] = []
    us, vs = g.edge_u.tolist(), g.edge_v.tolist()

    def extend(e: int, comp: List[int]) -> None:
        if len(chosen) == g.n - 1:
            trees.append(SpanningTree.from_edges(g, chosen))
            return
        if e == g.m:
            return
        a, b = comp[us[e]], comp[vs[e]]
        if a != b:
            merged = [a if c == b else c for c in comp]
            chosen.append(e)
            extend(e + 1, merged)
            chosen.pop()
        keep[e] = False
        if is_connected(g, keep):
            extend(e + 1, comp)
        keep[e] = True

    extend(0, list(range(g.n)))
    if len(trees) != expected:  # pragma: no cover
        raise RuntimeError(f"Enumerated {len(trees)} trees, Kirchhoff count is {expected}")
    return trees


def _side_chunks(n: int) -> Iterator[np.ndarray]:
    total = 1 << (n - 1)
    bits = np.arange(max(n - 1, 0), dtype=np.int64)
    for start in range(0, total, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        sides = np.zeros((codes.shape[0], n), dtype=np.uint8)
        if n > 1:
            sides[:, 1:] = (codes[:, None] >> bits) & 1
        yield sides


def _check_vertices(g: SignedGraph, cap: int) -> None:
    if g.n > cap:
        raise TooLarge(f"{g.n} vertices exceed the balanced-state cap of {cap}")


def enumerate_balanced_states(
    g: SignedGraph, cap: int = DEFAULT_MAX_VERTICES
) -> List[BalancedState]:
    """Every canonical bipartition with the edges g must flip to reach it"""
    _check_vertices(g, cap)
    negative = g.edge_sign < 0
    states: List[BalancedState] = []
    for sides in _side_chunks(g.n):
        cut = sides[:, g.edge_u] != sides[:, g.edge_v]
        for side, row in zip(sides, cut != negative):
            states.append(BalancedState.from_side(side, np.flatnonzero(row).tolist()))
    return states


def frustration_index(g: SignedGraph, cap: int = DEFAULT_MAX_VERTICES) -> int:
    """Fewest sign changes that balance g"""
    _check_vertices(g, cap)
    negative = g.edge_sign < 0
    best = g.m
    for sides in _side_chunks(g.n):
        cut = sides[:, g.edge_u] != sides[:, g.edge_v]
        best = min(best, int((cut != negative).sum(axis=1).min()))
    return best


def has_minimal_balancing_set(g: SignedGraph, side: Sequence[int]) -> bool:
    """True iff some spanning tree balances g into ``side``.

    That holds exactly when removing the edges the state flips leaves g
    connected; such a set is minimal and no larger than the cyclomatic number.
    """
    side = np.asarray(side, dtype=np.uint8)
    cut = side[g.edge_u] != side[g.edge_v]
    differ = cut != (g.edge_sign < 0)
    if int(differ.sum()) > cyclomatic_number(g):
        return False
    return is_connected(g, ~differ)


def _tree_states(
    g: SignedGraph, trees: Sequence[SpanningTree]
) -> Tuple[Counter, Dict[bytes, BalancedState]]:
    weights: Counter = Counter()
    states: Dict[bytes, BalancedState] = {}
    for tree in trees:
        state = balance_with_tree(g, tree)
        weights[state.key] += 1
        states.setdefault(state.key, state)
    return weights, states


def frustration_cloud_exact(
    g: SignedGraph,
    max_trees: int = DEFAULT_MAX_TREES,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> FrustrationCloud:
    """All states reachable by tree balancing, weighted by tree count"""
    _check_vertices(g, max_vertices)
    trees = enumerate_spanning_trees(g, max_trees)
    weights, states = _tree_states(g, trees)

    reachable = {
        s.key
        for s in enumerate_balanced_states(g, max_vertices)
        if has_minimal_balancing_set(g, s.side)
    }
    if reachable != set(weights):
        raise CloudMismatch(
            f"Tree balancing reached {len(weights)} states, lattice predicts {len(reachable)}"
        )

    cloud = [
        CloudState(
            side=tuple(int(x) for x in states[key].side),
            weight=weight,
            distance=len(states[key].flipped_edges),
            majority_size=states[key].majority_size,
        )
        for key, weight in weights.items()
    ]
    cloud.sort(key=lambda c: (-c.weight, c.side))
    logger.info("Frustration cloud: %d states over %d trees", len(cloud), len(trees))
    return FrustrationCloud(tuple(cloud), len(trees), cyclomatic_number(g))


def fundamental_cycle(g: SignedGraph, t: SpanningTree, e: int) -> List[int]:
    """Edge indices of the cycle e closes in t, starting with e"""
    if e in t.edge_ids():
        raise EdgeInTree(f"Edge {e} belongs to the spanning tree")
    depth = np.zeros(t.n, dtype=np.int64)
    for v in range(t.n):
        x, d = v, 0
        while t.parent[x] >= 0:
            x, d = int(t.parent[x]), d + 1
        depth[v] = d
    a, b = int(g.edge_u[e]), int(g.edge_v[e])
    left: List[int] = []
    right: List[int] = []
    while depth[a] > depth[b]:
        left.append(int(t.parent_edge[a]))
        a = int(t.parent[a])
    while depth[b] > depth[a]:
        right.append(int(t.parent_edge[b]))
        b = int(t.parent[b])
    while a != b:
        left.append(int(t.parent_edge[a]))
        right.append(int(t.parent_edge[b]))
        a, b = int(t.parent[a]), int(t.parent[b])
    return [e] + left + right[::-1]


def _tree_side(g: SignedGraph, t: SpanningTree) -> np.ndarray:
    """Bipartition a tree's edges force, by walking the tree from vertex 0"""
    in_tree = t.edge_ids()
    label = [0] * g.n
    label[0] = 1
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y, e in g.adjacency[x]:
            if e in in_tree and label[y] == 0:
                label[y] = label[x] * g.edges[e].sign
                queue.append(y)
    return np.array([0 if x == 1 else 1 for x in label], dtype=np.uint8)


def _exact_sides(g: SignedGraph, max_trees: int) -> Tuple[List[np.ndarray], int]:
    trees = enumerate_spanning_trees(g, max_trees)
    return [_tree_side(g, t) for t in trees], len(trees)


def _vertical(
    g: SignedGraph, sides: Sequence[np.ndarray], total: int, t: int
) -> Tuple[Fraction, ...]:
    scores = [Fraction(0)] * g.n
    for side in sides:
        ones = int(side.sum())
        if 2 * ones == g.n:
            winner = side[t]
        else:
            winner = 1 if 2 * ones > g.n else 0
        for v in range(g.n):
            if side[v] == winner:
                scores[v] += 1
    return tuple(x / total for x in scores)


def exact_metrics(
    g: SignedGraph,
    tie_break: Optional[int] = None,
    tie_agreement: TieAgreement = TieAgreement.ZERO_CUT,
    normalized: bool = True,
    max_trees: int = DEFAULT_MAX_TREES,
) -> MetricsReport:
    """Status, agreement, influence and controversy over every spanning tree"""
    tie_agreement = TieAgreement.parse(tie_agreement)
    if tie_break is not None and not 0 <= tie_break < g.n:
        raise MissingTieBreak(f"Tie-break vertex {tie_break} outside 0..{g.n - 1}")
    sides, total = _exact_sides(g, max_trees)
    half = Fraction(1, 2)

    status = [Fraction(0)] * g.n
    agreement = [Fraction(0)] * g.m
    ties = 0
    for side in sides:
        ones = int(side.sum())
        tie = 2 * ones == g.n
        majority = 1 if 2 * ones > g.n else 0
        ties += tie
        for v in range(g.n):
            if tie:
                status[v] += half
            elif side[v] == majority:
                status[v] += 1
        for i, edge in enumerate(g.edges):
            together = side[edge.u] == side[edge.v]
            if tie:
                if together or tie_agreement is TieAgreement.HALF:
                    agreement[i] += half
            elif together and side[edge.u] == majority:
                agreement[i] += 1

    status_t = tuple(x / total for x in status)
    agreement_t = tuple(x / total for x in agreement)
    influence = []
    for v in range(g.n):
        incident = [agreement_t[e] for _, e in g.adjacency[v]]
        raw = sum(incident, Fraction(0))
        influence.append(raw / len(incident) if normalized and incident else raw)

    return MetricsReport(
        status=status_t,
        agreement=agreement_t,
        influence=tuple(influence),
        controversy=sum(status_t, Fraction(0)) / g.n,
        provenance=Provenance(
            sampler="exhaustive",
            seed=None,
            trees=total,
            tie_break=g.label_of(tie_break) if tie_break is not None else None,
            tie_agreement=tie_agreement.value,
            influence_normalized=normalized,
            shuffled_neighbors=False,
        ),
        vertical_status=_vertical(g, sides, total, tie_break) if tie_break is not None else None,
        tie_count=ties,
        distinct_states=len({side.tobytes() for side in sides}),
        trees_seen=total,
    )


def all_vertical_statuses(
    g: SignedGraph, max_trees: int = DEFAULT_MAX_TREES
) -> Dict[str, Tuple[Fraction, ...]]:
    """Vertical status for every choice of tie-break vertex, keyed by its label"""
    sides, total = _exact_sides(g, max_trees)
    return {g.label_of(t): _vertical(g, sides, total, t) for t in range(g.n)}
