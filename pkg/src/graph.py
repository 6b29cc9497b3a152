"""Connectivity helpers over SignedGraph"""

from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .models import SignedGraph, label_sort_key


def _component_labels(
    g: SignedGraph, edge_mask: Optional[np.ndarray] = None
) -> Tuple[int, np.ndarray]:
    if g.n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    u, v = g.edge_u, g.edge_v
    if edge_mask is not None:
        u, v = u[edge_mask], v[edge_mask]
    data = np.ones(u.shape[0], dtype=np.int8)
    adj = coo_matrix((data, (u, v)), shape=(g.n, g.n)).tocsr()
    count, labels = _cc(adj, directed=False)
    return int(count), labels


def component_count(g: SignedGraph) -> int:
    return _component_labels(g)[0]


def is_connected(g: SignedGraph, edge_mask: Optional[np.ndarray] = None) -> bool:
    """True if g (restricted to ``edge_mask`` edges when given) is connected"""
    return _component_labels(g, edge_mask)[0] <= 1


def connected_components(g: SignedGraph) -> List[SignedGraph]:
    """Maximal connected subgraphs, largest first; ties by smallest original label"""
    count, labels = _component_labels(g)
    groups: List[List[int]] = [[] for _ in range(count)]
    for vertex, comp in enumerate(labels):
        groups[comp].append(vertex)
    groups.sort(key=lambda vs: (-len(vs), min(label_sort_key(g.labels[x]) for x in vs)))
    return [g.subgraph(vs) for vs in groups]


def largest_component(g: SignedGraph) -> SignedGraph:
    return connected_components(g)[0]


def cyclomatic_number(g: SignedGraph) -> int:
    """|E| - |V| + number of connected components"""
    return g.m - g.n + component_count(g)
