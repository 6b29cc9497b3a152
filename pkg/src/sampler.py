"""Spanning-tree sampling and exact spanning-tree counting"""

from __future__ import annotations

from collections import deque
from typing import Iterator, List

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import Disconnected, TooLarge
from .graph import is_connected
from .models import SamplerKind, SignedGraph, SpanningTree

_SEED_MASK = (1 << 64) - 1
DEFAULT_COUNT_MAX_VERTICES = 2000


def tree_rng(seed: int, index: int) -> np.random.Generator:
    """Private stream for tree ``index``; shared by no other tree"""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & _SEED_MASK, int(index)]))


def _find(parent: List[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _random_mst(g: SignedGraph, rng: np.random.Generator) -> SpanningTree:
    weights = rng.random(g.m)
    # primary key weight, ties by edge index
    order = np.lexsort((np.arange(g.m), weights))
    parent = list(range(g.n))
    rank = [0] * g.n
    chosen: List[int] = []
    us, vs = g.edge_u, g.edge_v
    for e in order.tolist():
        ru, rv = _find(parent, int(us[e])), _find(parent, int(vs[e]))
        if ru == rv:
            continue
        if rank[ru] < rank[rv]:
            ru, rv = rv, ru
        parent[rv] = ru
        if rank[ru] == rank[rv]:
            rank[ru] += 1
        chosen.append(e)
        if len(chosen) == g.n - 1:
            break
    if len(chosen) != g.n - 1:
        raise Disconnected(f"Graph with {g.n} vertices is not connected")
    return SpanningTree.from_edges(g, chosen, root=0)


def _shuffled(g: SignedGraph, v: int, rng: np.random.Generator):
    row = g.adjacency[v]
    if len(row) < 2:
        return row
    return [row[i] for i in rng.permutation(len(row))]


def _breadth_first(g: SignedGraph, rng: np.random.Generator) -> SpanningTree:
    root = int(rng.integers(g.n))
    parent = np.full(g.n, -1, dtype=np.int64)
    parent_edge = np.full(g.n, -1, dtype=np.int64)
    seen = np.zeros(g.n, dtype=bool)
    seen[root] = True
    order = [root]
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y, e in _shuffled(g, x, rng):
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                parent_edge[y] = e
                order.append(y)
                queue.append(y)
    if len(order) != g.n:
        raise Disconnected(f"Graph with {g.n} vertices is not connected")
    return SpanningTree.from_parents(g, root, parent, parent_edge, order)


def _depth_first(g: SignedGraph, rng: np.random.Generator) -> SpanningTree:
    root = int(rng.integers(g.n))
    parent = np.full(g.n, -1, dtype=np.int64)
    parent_edge = np.full(g.n, -1, dtype=np.int64)
    seen = np.zeros(g.n, dtype=bool)
    seen[root] = True
    order = [root]
    stack = [(root, iter(_shuffled(g, root, rng)))]
    while stack:
        x, neighbors = stack[-1]
        for y, e in neighbors:
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                parent_edge[y] = e
                order.append(y)
                stack.append((y, iter(_shuffled(g, y, rng))))
                break
        else:
            stack.pop()
    if len(order) != g.n:
        raise Disconnected(f"Graph with {g.n} vertices is not connected")
    return SpanningTree.from_parents(g, root, parent, parent_edge, order)


_SAMPLERS = {
    SamplerKind.RANDOM_MST: _random_mst,
    SamplerKind.BREADTH_FIRST: _breadth_first,
    SamplerKind.DEPTH_FIRST: _depth_first,
}


def sample_tree(g: SignedGraph, kind: SamplerKind, seed: int, index: int) -> SpanningTree:
    """Spanning tree number ``index`` of the (kind, seed) sequence.

    The result depends only on the arguments, so trees can be produced in any
    order and on any worker.
    """
    if g.n == 0:
        raise Disconnected("Empty graph has no spanning tree")
    return _SAMPLERS[SamplerKind.parse(kind)](g, tree_rng(seed, index))


def sample_trees(
    g: SignedGraph, kind: SamplerKind, seed: int, start: int, stop: int
) -> Iterator[SpanningTree]:
    """Trees ``start..stop-1`` of the sequence"""
    for index in range(start, stop):
        yield sample_tree(g, kind, seed, index)


def count_spanning_trees(g: SignedGraph, max_vertices: int = DEFAULT_COUNT_MAX_VERTICES) -> int:
    """Exact Kirchhoff count: determinant of the Laplacian without row/column 0.

    The determinant is taken by sympy over the integers (Bareiss elimination),
    so counts far beyond 2**64 stay exact. The reduced Laplacian is dense,
    hence the vertex cap.
    """
    if g.n == 0 or not is_connected(g):
        raise Disconnected("Spanning trees are only counted for connected graphs")
    if g.n > max_vertices:
        raise TooLarge(f"{g.n} vertices exceed the tree-count cap of {max_vertices}")
    size = g.n - 1
    if size == 0:
        return 1
    lap = np.diag(g.degrees)
    np.subtract.at(lap, (g.edge_u, g.edge_v), 1)
    np.subtract.at(lap, (g.edge_v, g.edge_u), 1)
    rows = [[ZZ(x) for x in row] for row in lap[1:, 1:].tolist()]
    return int(DomainMatrix(rows, (size, size), ZZ).det())
