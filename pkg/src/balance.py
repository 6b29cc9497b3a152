"""Tree balancing: from a spanning tree to the nearest balanced state"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import EdgeInTree, TreeMismatch
from .models import BalancedState, SignedGraph, SpanningTree


def _check_tree(g: SignedGraph, t: SpanningTree) -> np.ndarray:
    if t.n != g.n:
        raise TreeMismatch(f"Tree covers {t.n} vertices, graph has {g.n}")
    ids = t.parent_edge[t.parent_edge >= 0]
    if ids.shape[0] != g.n - 1 or np.any(ids >= g.m):
        raise TreeMismatch("Tree edges do not form a spanning tree of the graph")
    children = np.flatnonzero(t.parent >= 0)
    ends = {tuple(sorted((int(g.edge_u[e]), int(g.edge_v[e])))) for e in ids}
    for child in children:
        a, b = sorted((int(child), int(t.parent[child])))
        if (a, b) not in ends:
            raise TreeMismatch(f"Parent link {child}->{t.parent[child]} is not a graph edge")
    return t.edge_mask(g.m)


def balance_with_tree(g: SignedGraph, t: SpanningTree) -> BalancedState:
    """Balance g along t.

    Tree edges keep their sign, so the bipartition is fixed by the path signs
    alone; the non-tree edges that disagree with it are the ones flipped.
    """
    in_tree = _check_tree(g, t)
    ps = t.path_sign.astype(np.int64)
    cycle_sign = g.edge_sign.astype(np.int64) * ps[g.edge_u] * ps[g.edge_v]
    flipped = np.flatnonzero((cycle_sign == -1) & ~in_tree)
    return BalancedState.from_side((ps == -1).astype(np.uint8), flipped.tolist())


def fundamental_cycle_sign(g: SignedGraph, t: SpanningTree, e: int) -> int:
    """Sign of the unique cycle in t + e"""
    if t.parent_edge.shape[0] and np.any(t.parent_edge == e):
        raise EdgeInTree(f"Edge {e} belongs to the spanning tree")
    u, v = int(g.edge_u[e]), int(g.edge_v[e])
    return int(g.edge_sign[e]) * int(t.path_sign[u]) * int(t.path_sign[v])


def state_signing(g: SignedGraph, s: BalancedState) -> np.ndarray:
    """Signs of g after toggling the state's flipped edges"""
    signs = g.edge_sign.astype(np.int8).copy()
    if s.flipped_edges.size:
        signs[s.flipped_edges] *= -1
    return signs


def _side_signing(g: SignedGraph, side: np.ndarray) -> np.ndarray:
    return np.where(side[g.edge_u] == side[g.edge_v], 1, -1).astype(np.int8)


def _basis_cycles_positive(g: SignedGraph, signs: np.ndarray) -> bool:
    label = np.zeros(g.n, dtype=np.int8)
    for start in range(g.n):
        if label[start]:
            continue
        label[start] = 1
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y, e in g.adjacency[x]:
                if not label[y]:
                    label[y] = label[x] * signs[e]
                    queue.append(y)
    # every non-tree edge closes one basis cycle; tree edges satisfy this trivially
    return bool(np.all(signs * label[g.edge_u] * label[g.edge_v] == 1))


def verify_balanced(g: SignedGraph, s: BalancedState) -> bool:
    """True iff the state's signing is exactly the one its bipartition induces"""
    if s.n != g.n:
        return False
    signs = state_signing(g, s)
    if not np.array_equal(signs, _side_signing(g, s.side)):
        return False
    return _basis_cycles_positive(g, signs)


def is_balanced(g: SignedGraph) -> bool:
    """True iff every cycle of g is positive"""
    return _basis_cycles_positive(g, g.edge_sign.astype(np.int8))
