"""Sentiment ingestion from edge-list files and signed-graph construction"""

from __future__ import annotations

import re
from collections import defaultdict
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

from .config import Config
from .errors import EmptyGraph, LabelCollision, ParseError
from .logger import get_logger
from .models import (
    RawSentiment,
    SignedEdge,
    SignedGraph,
    SymmetrizationPolicy,
    label_sort_key,
)

logger = get_logger(__name__)

_SPLIT_RE = re.compile(r"[\s,]+")


def parse_edge_list(path: str | Path) -> List[RawSentiment]:
    """Read ``source target value`` lines (SNAP soc-sign layout).

    Blank lines and ``#`` comments are skipped, extra columns are ignored.
    """
    p = Path(path)
    records: List[RawSentiment] = []
    with p.open("rb") as f:
        for lineno, raw_bytes in enumerate(f, start=1):
            try:
                line = raw_bytes.decode("utf-8").strip()
            except UnicodeDecodeError as exc:
                raise ParseError(
                    f"invalid UTF-8 at byte {exc.start}", line=lineno, path=str(p)
                ) from None
            if not line or line.startswith("#"):
                continue
            tokens = [t for t in _SPLIT_RE.split(line) if t]
            if len(tokens) < 3:
                raise ParseError(
                    f"expected 'source target value', got {line!r}", line=lineno, path=str(p)
                )
            try:
                value = int(tokens[2])
            except ValueError:
                try:
                    as_float = float(tokens[2])
                except ValueError:
                    raise ParseError(
                        f"sentiment value {tokens[2]!r} is not a number", line=lineno, path=str(p)
                    ) from None
                if not as_float.is_integer():
                    raise ParseError(
                        f"sentiment value {tokens[2]!r} is not an integer", line=lineno, path=str(p)
                    )
                value = int(as_float)
            records.append(RawSentiment(tokens[0], tokens[1], value, lineno))
    logger.info("Parsed %d sentiments from %s", len(records), p)
    return records


def parse_wiki_elections(path: str | Path) -> List[RawSentiment]:
    """Read the SNAP Wikipedia election dump.

    ``U`` sets the nominee of the current election, ``N`` records the
    nomination as a +1 sentiment and ``V`` records a vote (-1, 0 or +1) from
    the voter to the nominee. Other record types carry no sentiment.
    """
    p = Path(path)
    records: List[RawSentiment] = []
    nominee = None
    with p.open("r", encoding="utf-8", errors="replace") as f:
        for lineno, raw_line in enumerate(f, start=1):
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            kind = tokens[0]
            if kind == "E":
                nominee = None
            elif kind == "U":
                if len(tokens) < 2:
                    raise ParseError("U record without user id", line=lineno, path=str(p))
                nominee = tokens[1]
            elif kind in ("N", "V"):
                if nominee is None:
                    raise ParseError(f"{kind} record before any U record", line=lineno, path=str(p))
                try:
                    if kind == "N":
                        records.append(RawSentiment(tokens[1], nominee, 1, lineno))
                    else:
                        records.append(RawSentiment(tokens[2], nominee, int(tokens[1]), lineno))
                except (IndexError, ValueError):
                    raise ParseError(
                        f"malformed {kind} record {line!r}", line=lineno, path=str(p)
                    ) from None
    logger.info("Parsed %d election sentiments from %s", len(records), p)
    return records


def _check_labels(labels: Iterable[str]) -> None:
    seen: Dict[int, str] = {}
    for label in labels:
        key = label_sort_key(label)
        if key[0] != 0:
            continue
        if key[1] in seen and seen[key[1]] != label:
            raise LabelCollision(
                f"Labels '{seen[key[1]]}' and '{label}' denote the same vertex id {key[1]}"
            )
        seen[key[1]] = label


def build_graph(
    raw: Sequence[RawSentiment], policy: SymmetrizationPolicy = SymmetrizationPolicy.SUM
) -> SignedGraph:
    """Collapse directed sentiments into a simple undirected signed graph.

    Neutral values and self-loops are dropped; surviving values on an
    unordered pair are summed and the edge takes the sign of the sum, zero
    sums are dropped. Vertex ids follow natural label order.
    """
    policy = SymmetrizationPolicy.parse(policy)
    neutral = 0
    loops = 0
    sums: Dict[Tuple[str, str], int] = defaultdict(int)
    seen_signs: Dict[Tuple[str, str], set] = defaultdict(set)
    for rec in raw:
        if rec.value == 0:
            neutral += 1
            continue
        a, b = str(rec.source).strip(), str(rec.target).strip()
        if a == b:
            loops += 1
            continue
        key = (a, b) if label_sort_key(a) <= label_sort_key(b) else (b, a)
        sums[key] += rec.value
        seen_signs[key].add(1 if rec.value > 0 else -1)

    if loops:
        logger.warning("Dropped %d self-loop sentiments", loops)
    if not sums:
        raise EmptyGraph(
            f"No signed edges survive ingestion ({len(raw)} sentiments, {neutral} neutral)"
        )

    cancelled = 0
    contradictory = 0
    kept: Dict[Tuple[str, str], int] = {}
    for key, total in sums.items():
        if policy is SymmetrizationPolicy.UNANIMOUS and len(seen_signs[key]) > 1:
            contradictory += 1
            continue
        if total == 0:
            cancelled += 1
            continue
        kept[key] = 1 if total > 0 else -1
    if cancelled or contradictory:
        logger.warning(
            "Dropped %d cancelled and %d contradictory vertex pairs", cancelled, contradictory
        )
    if not kept:
        raise EmptyGraph("Every vertex pair cancelled out; no signed edges remain")

    labels = sorted({x for pair in kept for x in pair}, key=label_sort_key)
    _check_labels(labels)
    index = {label: i for i, label in enumerate(labels)}
    edges = sorted(
        (SignedEdge(index[a], index[b], sign) for (a, b), sign in kept.items()),
        key=lambda e: (e.u, e.v),
    )
    graph = SignedGraph(len(labels), tuple(edges), tuple(labels))
    logger.info(
        "Built signed graph: %d vertices, %d edges (%d+ / %d-), %d neutral dropped",
        graph.n,
        graph.m,
        graph.positive_count,
        graph.negative_count,
        neutral,
    )
    return graph


def graph_from_triples(
    triples: Iterable[Tuple[object, object, int]],
    policy: SymmetrizationPolicy = SymmetrizationPolicy.SUM,
) -> SignedGraph:
    """Convenience constructor from (source, target, value) triples"""
    return build_graph([RawSentiment(str(a), str(b), int(v)) for a, b, v in triples], policy)


def export_edge_list(g: SignedGraph, path: str | Path) -> Path:
    """Write ``u v sign`` lines with original labels, sorted by (u, v)"""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    rows = sorted(
        (
            (g.labels[e.u], g.labels[e.v], e.sign)
            if label_sort_key(g.labels[e.u]) <= label_sort_key(g.labels[e.v])
            else (g.labels[e.v], g.labels[e.u], e.sign)
            for e in g.edges
        ),
        key=lambda r: (label_sort_key(r[0]), label_sort_key(r[1])),
    )
    with p.open("w", encoding="utf-8") as f:
        for u, v, sign in rows:
            f.write(f"{u} {v} {sign}\n")
    logger.info("Exported %d edges to %s", len(rows), p)
    return p


class EdgeListIngester:
    """Loads the configured input file into a SignedGraph"""

    def __init__(self, config: Config):
        self.config = config

    def fetch_sentiments(self) -> List[RawSentiment]:
        path = self.config.INPUT_PATH
        if path is None:
            raise FileNotFoundError("No input file configured")
        if not Path(path).exists():
            raise FileNotFoundError(f"Input file not found: {path}")
        if self.config.INPUT_FORMAT == "wiki-elec":
            return parse_wiki_elections(path)
        return parse_edge_list(path)

    def load_graph(self) -> SignedGraph:
        raw = self.fetch_sentiments()
        if not raw:
            raise EmptyGraph(f"No sentiments in {self.config.INPUT_PATH}")
        return build_graph(raw, self.config.SYMMETRIZATION)
