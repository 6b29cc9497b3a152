"""Consensus metrics accumulated over balanced states.

Tallies are kept in half-units (a strict-majority membership is worth 2, a
tie 1) so every metric stays an exact integer ratio until it is reported.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import EmptyAccumulator, GraphMismatch, MissingTieBreak, ZeroDegree
from .models import (
    BalancedState,
    MetricsReport,
    Provenance,
    SignedGraph,
    TieAgreement,
)


@dataclass
class ConsensusAccumulator:
    """Mergeable tallies for one graph"""

    n: int
    edge_u: np.ndarray = field(repr=False)
    edge_v: np.ndarray = field(repr=False)
    fingerprint: str = ""
    tie_break: Optional[int] = None
    tie_agreement: TieAgreement = TieAgreement.ZERO_CUT
    vertex_tally: np.ndarray = field(init=False, repr=False)
    edge_tally: np.ndarray = field(init=False, repr=False)
    vertical_tally: Optional[np.ndarray] = field(init=False, repr=False)
    state_weights: Counter = field(init=False, repr=False)
    tie_count: int = field(init=False, default=0)
    trees_seen: int = field(init=False, default=0)

    def __post_init__(self):
        self.tie_agreement = TieAgreement.parse(self.tie_agreement)
        if self.tie_break is not None and not 0 <= self.tie_break < self.n:
            raise MissingTieBreak(f"Tie-break vertex {self.tie_break} outside 0..{self.n - 1}")
        self.vertex_tally = np.zeros(self.n, dtype=np.int64)
        self.edge_tally = np.zeros(self.edge_u.shape[0], dtype=np.int64)
        self.vertical_tally = (
            np.zeros(self.n, dtype=np.int64) if self.tie_break is not None else None
        )
        self.state_weights = Counter()

    @classmethod
    def for_graph(
        cls,
        g: SignedGraph,
        tie_break: Optional[int] = None,
        tie_agreement: TieAgreement = TieAgreement.ZERO_CUT,
    ) -> "ConsensusAccumulator":
        return cls(
            n=g.n,
            edge_u=g.edge_u,
            edge_v=g.edge_v,
            fingerprint=g.fingerprint,
            tie_break=tie_break,
            tie_agreement=tie_agreement,
        )

    @property
    def m(self) -> int:
        return int(self.edge_u.shape[0])

    def add(self, s: BalancedState, weight: int = 1) -> None:
        """Tally ``weight`` trees that all balanced into ``s``"""
        if s.n != self.n:
            raise GraphMismatch(f"State over {s.n} vertices, accumulator over {self.n}")
        side = s.side.astype(bool)
        same = side[self.edge_u] == side[self.edge_v]
        if s.is_tie:
            self.vertex_tally += weight
            if self.tie_agreement is TieAgreement.HALF:
                self.edge_tally += weight
            else:
                self.edge_tally += weight * same
            if self.vertical_tally is not None:
                winners = side == side[self.tie_break]
                self.vertical_tally += 2 * weight * winners
            self.tie_count += weight
        else:
            majority_side = 2 * int(side.sum()) > self.n
            winners = side == majority_side
            self.vertex_tally += 2 * weight * winners
            self.edge_tally += 2 * weight * (same & winners[self.edge_u])
            if self.vertical_tally is not None:
                self.vertical_tally += 2 * weight * winners
        self.state_weights[s.key] += weight
        self.trees_seen += weight

    def merge(self, other: "ConsensusAccumulator") -> "ConsensusAccumulator":
        """New accumulator holding both tallies; neither input is modified"""
        if (
            other.n != self.n
            or other.m != self.m
            or (self.fingerprint and other.fingerprint and other.fingerprint != self.fingerprint)
        ):
            raise GraphMismatch("Cannot merge accumulators built over different graphs")
        if other.tie_break != self.tie_break or other.tie_agreement is not self.tie_agreement:
            raise GraphMismatch("Cannot merge accumulators with different tie settings")
        out = ConsensusAccumulator(
            n=self.n,
            edge_u=self.edge_u,
            edge_v=self.edge_v,
            fingerprint=self.fingerprint or other.fingerprint,
            tie_break=self.tie_break,
            tie_agreement=self.tie_agreement,
        )
        out.vertex_tally = self.vertex_tally + other.vertex_tally
        out.edge_tally = self.edge_tally + other.edge_tally
        if self.vertical_tally is not None:
            out.vertical_tally = self.vertical_tally + other.vertical_tally
        out.state_weights = self.state_weights + other.state_weights
        out.tie_count = self.tie_count + other.tie_count
        out.trees_seen = self.trees_seen + other.trees_seen
        return out


def accumulate(acc: ConsensusAccumulator, s: BalancedState) -> ConsensusAccumulator:
    acc.add(s)
    return acc


def _require_trees(acc: ConsensusAccumulator) -> int:
    if acc.trees_seen == 0:
        raise EmptyAccumulator("No spanning trees have been accumulated")
    return acc.trees_seen


def _ratios(tally: np.ndarray, denominator: int) -> Tuple[Fraction, ...]:
    return tuple(Fraction(int(x), denominator) for x in tally)


def status(acc: ConsensusAccumulator) -> Tuple[Fraction, ...]:
    """Fraction of trees whose state puts each vertex in the majority (ties count half)"""
    return _ratios(acc.vertex_tally, 2 * _require_trees(acc))


def agreement(acc: ConsensusAccumulator) -> Tuple[Fraction, ...]:
    """Fraction of trees whose state keeps each edge inside the majority"""
    return _ratios(acc.edge_tally, 2 * _require_trees(acc))


def vertical_status(acc: ConsensusAccumulator) -> Tuple[Fraction, ...]:
    """Status with every tie resolved in favour of the tie-break vertex's side"""
    trees = _require_trees(acc)
    if acc.vertical_tally is None:
        raise MissingTieBreak("No tie-break vertex was fixed for this accumulator")
    return _ratios(acc.vertical_tally, 2 * trees)


def controversy(acc: ConsensusAccumulator) -> Fraction:
    """Mean status over all vertices"""
    trees = _require_trees(acc)
    return Fraction(int(acc.vertex_tally.sum()), 2 * trees * acc.n)


def influence(
    g: SignedGraph, agreement: Sequence[Fraction], normalized: bool = True
) -> Tuple[Fraction, ...]:
    """Average (or, unnormalized, summed) agreement of each vertex's incident edges"""
    if len(agreement) != g.m:
        raise GraphMismatch(f"Expected {g.m} agreement values, got {len(agreement)}")
    totals = [Fraction(0)] * g.n
    for e, value in zip(g.edges, agreement):
        totals[e.u] += value
        totals[e.v] += value
    if not normalized:
        return tuple(totals)
    degrees = g.degrees
    if np.any(degrees == 0):
        isolated = int(np.flatnonzero(degrees == 0)[0])
        raise ZeroDegree(f"Vertex '{g.label_of(isolated)}' has no incident edges")
    return tuple(total / int(d) for total, d in zip(totals, degrees))


def _weighted_sides(acc: ConsensusAccumulator):
    for key in sorted(acc.state_weights):
        yield BalancedState.side_from_key(key, acc.n).astype(bool), acc.state_weights[key]


def status_from_states(acc: ConsensusAccumulator) -> Tuple[Fraction, ...]:
    """Status recomputed from the weighted distinct states"""
    trees = _require_trees(acc)
    tally = np.zeros(acc.n, dtype=np.int64)
    for side, weight in _weighted_sides(acc):
        ones = int(side.sum())
        if 2 * ones == acc.n:
            tally += weight
        else:
            tally += 2 * weight * (side == (2 * ones > acc.n))
    return _ratios(tally, 2 * trees)


def vertical_status_from_states(acc: ConsensusAccumulator, t: int) -> Tuple[Fraction, ...]:
    """Vertical status for tie-break vertex ``t`` from the retained states"""
    trees = _require_trees(acc)
    if not 0 <= t < acc.n:
        raise MissingTieBreak(f"Tie-break vertex {t} outside 0..{acc.n - 1}")
    tally = np.zeros(acc.n, dtype=np.int64)
    for side, weight in _weighted_sides(acc):
        ones = int(side.sum())
        winner = side[t] if 2 * ones == acc.n else (2 * ones > acc.n)
        tally += 2 * weight * (side == winner)
    return _ratios(tally, 2 * trees)


def build_report(
    g: SignedGraph,
    acc: ConsensusAccumulator,
    provenance: Provenance,
    normalized_influence: bool = True,
) -> MetricsReport:
    if acc.n != g.n or acc.m != g.m or (acc.fingerprint and acc.fingerprint != g.fingerprint):
        raise GraphMismatch("Accumulator was built over a different graph")
    agree = agreement(acc)
    return MetricsReport(
        status=status(acc),
        agreement=agree,
        influence=influence(g, agree, normalized_influence),
        controversy=controversy(acc),
        provenance=provenance,
        vertical_status=vertical_status(acc) if acc.vertical_tally is not None else None,
        tie_count=acc.tie_count,
        distinct_states=len(acc.state_weights),
        trees_seen=acc.trees_seen,
    )
