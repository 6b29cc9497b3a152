"""End-to-end runs: ingest, split into components, balance, report, persist"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from .balance import balance_with_tree
from .config import Config
from .errors import MissingTieBreak
from .graph import connected_components, cyclomatic_number
from .ingestion import EdgeListIngester
from .logger import get_logger
from .metrics import ConsensusAccumulator, build_report
from .models import (
    ComponentPolicy,
    FrustrationCloud,
    MetricsReport,
    Provenance,
    SamplerKind,
    SignedGraph,
    TieAgreement,
)
from .oracle import exact_metrics, frustration_cloud_exact, frustration_index
from .persister import OutputPersister, decimal_text, fraction_text
from .sampler import sample_trees

logger = get_logger(__name__)


@dataclass
class ComponentResult:
    index: int
    graph: SignedGraph
    report: MetricsReport
    summary: Dict[str, object]
    directory: Path
    cloud: Optional[FrustrationCloud] = None


def shard_bounds(trees: int, workers: int) -> List[Tuple[int, int]]:
    """Contiguous [start, stop) tree-index ranges, one per worker"""
    shards = max(1, min(workers, trees))
    edges = np.linspace(0, trees, shards + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def accumulate_shard(
    g: SignedGraph,
    kind: SamplerKind,
    seed: int,
    start: int,
    stop: int,
    tie_break: Optional[int],
    tie_agreement: TieAgreement,
) -> ConsensusAccumulator:
    """Balance trees ``start..stop-1`` into a private accumulator"""
    acc = ConsensusAccumulator.for_graph(g, tie_break, tie_agreement)
    for tree in sample_trees(g, kind, seed, start, stop):
        acc.add(balance_with_tree(g, tree))
    return acc


def sample_accumulator(
    g: SignedGraph, config: Config, tie_break: Optional[int] = None
) -> ConsensusAccumulator:
    """Accumulate ``config.TREES`` sampled trees over ``config.WORKERS`` processes.

    Shards are merged in index order, so the tallies do not depend on the
    worker count.
    """
    bounds = shard_bounds(config.TREES, config.WORKERS)
    args = [
        (g, config.sampler_kind, config.SEED, start, stop, tie_break, config.tie_agreement)
        for start, stop in bounds
    ]
    if len(args) == 1:
        parts = [accumulate_shard(*args[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(args)) as pool:
            parts = list(pool.map(accumulate_shard, *zip(*args)))
    return reduce(lambda a, b: a.merge(b), parts)


def select_components(g: SignedGraph, policy: ComponentPolicy) -> List[SignedGraph]:
    components = connected_components(g)
    logger.info(
        "Found %d connected components (largest has %d vertices)",
        len(components),
        components[0].n,
    )
    if ComponentPolicy.parse(policy) is ComponentPolicy.LARGEST:
        return components[:1]
    return components


def resolve_tie_break(
    components: Sequence[SignedGraph], label: Optional[str]
) -> List[Optional[int]]:
    """Vertex id of the tie-break label in each component (None where absent)"""
    if label is None:
        return [None] * len(components)
    resolved = [c.vertex_of(label) if c.has_label(label) else None for c in components]
    if all(v is None for v in resolved):
        raise MissingTieBreak(f"Tie-break vertex '{label}' is not in the selected component")
    return resolved


def summarize(report: MetricsReport, g: SignedGraph) -> Dict[str, object]:
    """key=value digest of one component's report"""
    status = pd.Series([float(x) for x in report.status])
    influence = pd.Series([float(x) for x in report.influence])
    prov = report.provenance
    summary: Dict[str, object] = {
        "vertices": g.n,
        "edges": g.m,
        "positive_edges": g.positive_count,
        "negative_edges": g.negative_count,
        "cyclomatic_number": cyclomatic_number(g),
        "sampler": prov.sampler,
        "seed": "none" if prov.seed is None else prov.seed,
        "trees": prov.trees,
        "tie_break": prov.tie_break or "none",
        "tie_agreement": prov.tie_agreement,
        "influence_normalized": str(prov.influence_normalized).lower(),
        "shuffled_neighbors": str(prov.shuffled_neighbors).lower(),
        "controversy": fraction_text(report.controversy),
        "controversy_decimal": decimal_text(report.controversy),
        "status_mean": f"{status.mean():.10g}",
        "status_std": f"{status.std():.10g}",
        "influence_mean": f"{influence.mean():.10g}",
        "influence_std": f"{influence.std():.10g}",
        "tie_states": report.tie_count,
        "distinct_states": report.distinct_states,
    }
    if g.n >= 2 and status.nunique() > 1 and influence.nunique() > 1:
        r, _ = stats.pearsonr(status, influence)
        summary["status_influence_r2"] = f"{r * r:.10g}"
    return summary


def _load(config: Config) -> Tuple[List[SignedGraph], List[Optional[int]]]:
    graph = EdgeListIngester(config).load_graph()
    components = select_components(graph, config.component_policy)
    return components, resolve_tie_break(components, config.TIE_BREAK)


def _write(config: Config, results: Sequence[ComponentResult]) -> None:
    persister = OutputPersister(config)
    persister.persist_all(
        [
            persister.render(r.directory, r.graph, r.report, r.summary, r.cloud)
            for r in results
        ]
    )


def run_pipeline(config: Config) -> List[ComponentResult]:
    """Sampled run; nothing is written until every component is computed"""
    config.validate()
    started = time.perf_counter()
    components, tie_breaks = _load(config)
    persister = OutputPersister(config)
    results: List[ComponentResult] = []
    for index, (g, t) in enumerate(zip(components, tie_breaks)):
        acc = sample_accumulator(g, config, t)
        provenance = Provenance(
            sampler=config.sampler_kind.value,
            seed=config.SEED,
            trees=config.TREES,
            tie_break=g.label_of(t) if t is not None else None,
            tie_agreement=config.tie_agreement.value,
            influence_normalized=config.INFLUENCE_NORMALIZED,
            shuffled_neighbors=config.sampler_kind is not SamplerKind.RANDOM_MST,
        )
        report = build_report(g, acc, provenance, config.INFLUENCE_NORMALIZED)
        results.append(
            ComponentResult(
                index=index,
                graph=g,
                report=report,
                summary=summarize(report, g),
                directory=persister.component_dir(index, len(components)),
            )
        )
        logger.info(
            "Component %d: %d trees, controversy %.6f, %d distinct states",
            index + 1,
            acc.trees_seen,
            float(report.controversy),
            report.distinct_states,
        )
    _write(config, results)
    logger.info(
        "Run finished in %.2fs",
        time.perf_counter() - started,
        extra={"meta": {"components": len(results), "out": str(config.OUTPUT_DIR)}},
    )
    return results


def run_oracle(config: Config) -> List[ComponentResult]:
    """Exhaustive run over every spanning tree; adds the frustration cloud listing"""
    config.validate()
    components, tie_breaks = _load(config)
    persister = OutputPersister(config)
    results: List[ComponentResult] = []
    for index, (g, t) in enumerate(zip(components, tie_breaks)):
        report = exact_metrics(
            g,
            tie_break=t,
            tie_agreement=config.tie_agreement,
            normalized=config.INFLUENCE_NORMALIZED,
            max_trees=config.ORACLE_MAX_TREES,
        )
        cloud = frustration_cloud_exact(g, config.ORACLE_MAX_TREES, config.ORACLE_MAX_VERTICES)
        summary = summarize(report, g)
        summary["frustration_index"] = frustration_index(g, config.ORACLE_MAX_VERTICES)
        summary["cloud_size"] = cloud.size
        results.append(
            ComponentResult(
                index=index,
                graph=g,
                report=report,
                summary=summary,
                directory=persister.component_dir(index, len(components)),
                cloud=cloud,
            )
        )
    _write(config, results)
    return results
