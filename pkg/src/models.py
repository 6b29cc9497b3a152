"""Data models for signed graphs, spanning trees, balanced states and reports"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import GraphError, LabelCollision, TreeMismatch


def label_sort_key(label: str) -> Tuple[int, int, str]:
    """Natural order: integer labels numerically first, then text labels"""
    text = label.strip()
    try:
        return (0, int(text), text)
    except ValueError:
        return (1, 0, text)


class _ParsableEnum(str, Enum):
    """str-valued enum accepting its value, its name or a registered alias"""

    @classmethod
    def parse(cls, value) -> "_ParsableEnum":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().replace("_", "-")
        for member in cls:
            if text in (member.value, member.name.lower().replace("_", "-")):
                return member
            if text in _ALIASES.get(member.value, ()):
                return member
        choices = ", ".join(m.value for m in cls)
        raise ValueError(f"Unknown {cls.__name__} '{value}' (choose from {choices})")


_ALIASES: Dict[str, Tuple[str, ...]] = {
    "random-mst": ("random", "randommst", "mst"),
    "bfs": ("breadth-first", "breadthfirst"),
    "dfs": ("depth-first", "depthfirst"),
}


class SamplerKind(_ParsableEnum):
    """Spanning-tree sampling strategy"""

    RANDOM_MST = "random-mst"
    BREADTH_FIRST = "bfs"
    DEPTH_FIRST = "dfs"


class SymmetrizationPolicy(_ParsableEnum):
    """How directed sentiments on one unordered pair collapse to a single sign"""

    SUM = "sum"
    UNANIMOUS = "unanimous"


class TieAgreement(_ParsableEnum):
    """Edge credit in tie states: zero-cut gives cut edges nothing, half gives every edge 0.5"""

    ZERO_CUT = "zero-cut"
    HALF = "half"


class ComponentPolicy(_ParsableEnum):
    LARGEST = "largest"
    ALL = "all"


@dataclass(frozen=True)
class RawSentiment:
    """One directed sentiment as read from the source file"""

    source: str
    target: str
    value: int
    line: Optional[int] = None


@dataclass(frozen=True)
class SignedEdge:
    u: int
    v: int
    sign: int

    def __post_init__(self):
        if self.u == self.v:
            raise GraphError(f"Self-loop on vertex {self.u}")
        if self.sign not in (1, -1):
            raise GraphError(f"Edge sign must be +1 or -1, got {self.sign}")


@dataclass(eq=False)
class SignedGraph:
    """Simple undirected graph with +1/-1 edge signs over dense vertex ids.

    ``labels[v]`` is the original identifier of vertex ``v``. The graph is not
    mutated after construction, so it can be shared by any number of readers.
    """

    n: int
    edges: Tuple[SignedEdge, ...]
    labels: Tuple[str, ...]
    adjacency: Tuple[Tuple[Tuple[int, int], ...], ...] = field(init=False, repr=False)
    edge_u: np.ndarray = field(init=False, repr=False)
    edge_v: np.ndarray = field(init=False, repr=False)
    edge_sign: np.ndarray = field(init=False, repr=False)
    _index: Dict[str, int] = field(init=False, repr=False)
    _lookup: Dict[Tuple[int, int], int] = field(init=False, repr=False)

    def __post_init__(self):
        self.edges = tuple(self.edges)
        self.labels = tuple(self.labels)
        if len(self.labels) != self.n:
            raise LabelCollision(f"{len(self.labels)} labels for {self.n} vertices")
        index: Dict[str, int] = {}
        for vid, label in enumerate(self.labels):
            if label in index:
                raise LabelCollision(f"Label '{label}' used by vertices {index[label]} and {vid}")
            index[label] = vid

        rows: List[List[Tuple[int, int]]] = [[] for _ in range(self.n)]
        lookup: Dict[Tuple[int, int], int] = {}
        for e, edge in enumerate(self.edges):
            if not (0 <= edge.u < self.n and 0 <= edge.v < self.n):
                raise GraphError(f"Edge {e} ({edge.u}, {edge.v}) outside 0..{self.n - 1}")
            key = (min(edge.u, edge.v), max(edge.u, edge.v))
            if key in lookup:
                raise GraphError(f"Parallel edges {lookup[key]} and {e} on pair {key}")
            lookup[key] = e
            rows[edge.u].append((edge.v, e))
            rows[edge.v].append((edge.u, e))

        self.adjacency = tuple(tuple(row) for row in rows)
        self.edge_u = np.fromiter((e.u for e in self.edges), dtype=np.int64, count=len(self.edges))
        self.edge_v = np.fromiter((e.v for e in self.edges), dtype=np.int64, count=len(self.edges))
        self.edge_sign = np.fromiter(
            (e.sign for e in self.edges), dtype=np.int8, count=len(self.edges)
        )
        self._index = index
        self._lookup = lookup

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def positive_count(self) -> int:
        return int(np.count_nonzero(self.edge_sign > 0))

    @property
    def negative_count(self) -> int:
        return int(np.count_nonzero(self.edge_sign < 0))

    @property
    def degrees(self) -> np.ndarray:
        return np.bincount(
            np.concatenate([self.edge_u, self.edge_v]), minlength=self.n
        ).astype(np.int64)

    @property
    def fingerprint(self) -> str:
        """Content hash of structure and signs"""
        h = hashlib.sha1(str(self.n).encode())
        h.update(self.edge_u.tobytes())
        h.update(self.edge_v.tobytes())
        h.update(self.edge_sign.tobytes())
        return h.hexdigest()

    def label_of(self, vertex: int) -> str:
        return self.labels[vertex]

    def has_label(self, label: str) -> bool:
        return str(label) in self._index

    def vertex_of(self, label: str) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"Unknown vertex label '{label}'") from None

    def edge_between(self, u: int, v: int) -> Optional[int]:
        return self._lookup.get((min(u, v), max(u, v)))

    def subgraph(self, vertices: Iterable[int]) -> "SignedGraph":
        """Induced subgraph, re-indexed densely in ascending original id order"""
        keep = sorted(set(int(x) for x in vertices))
        remap = {old: new for new, old in enumerate(keep)}
        edges = [
            SignedEdge(remap[e.u], remap[e.v], e.sign)
            for e in self.edges
            if e.u in remap and e.v in remap
        ]
        return SignedGraph(len(keep), tuple(edges), tuple(self.labels[v] for v in keep))

    def with_signs(self, signs: Sequence[int]) -> "SignedGraph":
        """Same underlying graph under another signing"""
        if len(signs) != self.m:
            raise GraphError(f"Expected {self.m} signs, got {len(signs)}")
        edges = tuple(SignedEdge(e.u, e.v, int(s)) for e, s in zip(self.edges, signs))
        return SignedGraph(self.n, edges, self.labels)


@dataclass(eq=False)
class SpanningTree:
    """Rooted spanning tree; parent links carry the connecting edge index"""

    root: int
    parent: np.ndarray
    parent_edge: np.ndarray
    path_sign: np.ndarray

    @property
    def n(self) -> int:
        return int(self.parent.shape[0])

    def edge_ids(self) -> FrozenSet[int]:
        return frozenset(int(e) for e in self.parent_edge if e >= 0)

    def edge_mask(self, m: int) -> np.ndarray:
        mask = np.zeros(m, dtype=bool)
        ids = self.parent_edge[self.parent_edge >= 0]
        mask[ids] = True
        return mask

    def leaf_count(self) -> int:
        if self.n < 2:
            return 0
        children = np.bincount(self.parent[self.parent >= 0], minlength=self.n)
        degree = children + (self.parent >= 0)
        return int(np.count_nonzero(degree == 1))

    @classmethod
    def from_parents(
        cls,
        graph: SignedGraph,
        root: int,
        parent: np.ndarray,
        parent_edge: np.ndarray,
        order: Sequence[int],
    ) -> "SpanningTree":
        """Build path signs along ``order`` (every vertex after its parent)"""
        path_sign = np.zeros(graph.n, dtype=np.int8)
        path_sign[root] = 1
        signs = graph.edge_sign
        for w in order:
            if w == root:
                continue
            path_sign[w] = path_sign[parent[w]] * signs[parent_edge[w]]
        return cls(root=root, parent=parent, parent_edge=parent_edge, path_sign=path_sign)

    @classmethod
    def from_edges(
        cls, graph: SignedGraph, edge_ids: Iterable[int], root: int = 0
    ) -> "SpanningTree":
        """Root an edge set at ``root``; TreeMismatch unless it spans the graph acyclically"""
        ids = set(int(e) for e in edge_ids)
        if len(ids) != graph.n - 1:
            raise TreeMismatch(f"{len(ids)} edges cannot span {graph.n} vertices")
        parent = np.full(graph.n, -1, dtype=np.int64)
        parent_edge = np.full(graph.n, -1, dtype=np.int64)
        seen = np.zeros(graph.n, dtype=bool)
        seen[root] = True
        order = [root]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, e in graph.adjacency[x]:
                if e in ids and not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    parent_edge[y] = e
                    order.append(y)
                    queue.append(y)
        if len(order) != graph.n:
            raise TreeMismatch("Edge set does not span the graph")
        return cls.from_parents(graph, root, parent, parent_edge, order)


@dataclass(eq=False)
class BalancedState:
    """Harary bipartition of one nearest balanced state.

    ``side`` is canonical (vertex 0 on side 0); ``flipped_edges`` holds the
    sorted indices of non-tree edges whose sign the balancing changed.
    """

    side: np.ndarray
    flipped_edges: np.ndarray
    majority_size: int

    @classmethod
    def from_side(
        cls, side: np.ndarray, flipped: Optional[Iterable[int]] = None
    ) -> "BalancedState":
        side = np.asarray(side, dtype=np.uint8).copy()
        if side.size and side[0] == 1:
            side ^= 1
        ones = int(side.sum())
        flips = np.array(sorted(flipped) if flipped is not None else [], dtype=np.int64)
        return cls(side=side, flipped_edges=flips, majority_size=max(ones, side.size - ones))

    @property
    def n(self) -> int:
        return int(self.side.shape[0])

    @property
    def key(self) -> bytes:
        return np.packbits(self.side).tobytes()

    @property
    def is_tie(self) -> bool:
        return 2 * self.majority_size == self.n

    @property
    def flipped_set(self) -> FrozenSet[int]:
        return frozenset(int(e) for e in self.flipped_edges)

    def side_string(self) -> str:
        return "".join("1" if s else "0" for s in self.side)

    @staticmethod
    def side_from_key(key: bytes, n: int) -> np.ndarray:
        return np.unpackbits(np.frombuffer(key, dtype=np.uint8), count=n)


@dataclass(frozen=True)
class Provenance:
    sampler: str
    seed: Optional[int]
    trees: int
    tie_break: Optional[str] = None
    tie_agreement: str = TieAgreement.ZERO_CUT.value
    influence_normalized: bool = True
    shuffled_neighbors: bool = True


@dataclass
class MetricsReport:
    """Final consensus metrics for one connected signed graph"""

    status: Tuple[Fraction, ...]
    agreement: Tuple[Fraction, ...]
    influence: Tuple[Fraction, ...]
    controversy: Fraction
    provenance: Provenance
    vertical_status: Optional[Tuple[Fraction, ...]] = None
    tie_count: int = 0
    distinct_states: int = 0
    trees_seen: int = 0


@dataclass(frozen=True)
class CloudState:
    """Element of a frustration cloud"""

    side: Tuple[int, ...]
    weight: int
    distance: int
    majority_size: int

    def side_string(self) -> str:
        return "".join(str(s) for s in self.side)


@dataclass
class FrustrationCloud:
    states: Tuple[CloudState, ...]
    total_trees: int
    cyclomatic_number: int

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def weights(self) -> List[int]:
        return [s.weight for s in self.states]

    @property
    def min_distance(self) -> int:
        return min(s.distance for s in self.states)
