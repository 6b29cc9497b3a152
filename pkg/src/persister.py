"""Output persistence module"""

from __future__ import annotations

import os
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from .config import Config
from .logger import get_logger
from .models import ComponentPolicy, FrustrationCloud, MetricsReport, SignedGraph

logger = get_logger(__name__)


def fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def decimal_text(x: Fraction) -> str:
    """10 significant digits"""
    return f"{float(x):.10g}"


def _rational_columns(name: str, values: Sequence[Fraction]) -> Dict[str, list]:
    return {
        name: [fraction_text(x) for x in values],
        f"{name}_decimal": [decimal_text(x) for x in values],
    }


def vertex_frame(report: MetricsReport, g: SignedGraph) -> pd.DataFrame:
    columns: Dict[str, list] = {
        "label": list(g.labels),
        "degree": [int(d) for d in g.degrees],
    }
    columns.update(_rational_columns("status", report.status))
    if report.vertical_status is not None:
        columns.update(_rational_columns("vertical_status", report.vertical_status))
    columns.update(_rational_columns("influence", report.influence))
    return pd.DataFrame(columns)


def edge_frame(report: MetricsReport, g: SignedGraph) -> pd.DataFrame:
    columns: Dict[str, list] = {
        "label_u": [g.labels[e.u] for e in g.edges],
        "label_v": [g.labels[e.v] for e in g.edges],
        "sign": [e.sign for e in g.edges],
    }
    columns.update(_rational_columns("agreement", report.agreement))
    return pd.DataFrame(columns)


def cloud_frame(cloud: FrustrationCloud) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "side": [s.side_string() for s in cloud.states],
            "weight": [s.weight for s in cloud.states],
            "distance": [s.distance for s in cloud.states],
            "majority_size": [s.majority_size for s in cloud.states],
            # tree balancing only flips edges, so distance is also the flip count
            "flips": [s.distance for s in cloud.states],
        }
    )


def summary_text(summary: Dict[str, object]) -> str:
    return "".join(f"{key}={value}\n" for key, value in summary.items())


def _stage(path: Path, text: str) -> Path:
    """Write ``text`` next to ``path`` under a hidden temp name"""
    tmp = path.with_name(f".{path.name}.tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    return tmp


def commit(outputs: Dict[Path, str]) -> List[Path]:
    """Stage every file, then rename them all; a failed stage leaves old outputs untouched"""
    staged: List[Tuple[Path, Path]] = []
    try:
        for path, text in outputs.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            staged.append((_stage(path, text), path))
    except BaseException:
        for tmp, _ in staged:
            tmp.unlink(missing_ok=True)
        raise
    for tmp, path in staged:
        os.replace(tmp, path)
    return [path for _, path in staged]


class OutputPersister:
    """Writes vertices.csv, edges.csv, summary.txt (and cloud.csv) per component"""

    def __init__(self, config: Config):
        self.config = config

    def component_dir(self, index: int, count: int) -> Path:
        """Output directory of component ``index`` (0-based) out of ``count``"""
        if count == 1 and self.config.component_policy is ComponentPolicy.LARGEST:
            return self.config.OUTPUT_DIR
        return self.config.OUTPUT_DIR / f"component-{index + 1:03d}"

    def render(
        self,
        directory: Path,
        g: SignedGraph,
        report: MetricsReport,
        summary: Dict[str, object],
        cloud: Optional[FrustrationCloud] = None,
    ) -> Dict[Path, str]:
        """File contents of one component, keyed by destination"""
        outputs = {
            directory / "vertices.csv": vertex_frame(report, g).to_csv(
                index=False, lineterminator="\n"
            ),
            directory / "edges.csv": edge_frame(report, g).to_csv(
                index=False, lineterminator="\n"
            ),
            directory / "summary.txt": summary_text(summary),
        }
        if cloud is not None:
            outputs[directory / "cloud.csv"] = cloud_frame(cloud).to_csv(
                index=False, lineterminator="\n"
            )
        return outputs

    def persist_all(self, rendered: Sequence[Dict[Path, str]]) -> List[Path]:
        """Commit the files of every component together"""
        outputs: Dict[Path, str] = {}
        for files in rendered:
            outputs.update(files)
        written = commit(outputs)
        logger.info(
            "Wrote %d files for %d components to %s",
            len(written),
            len(rendered),
            self.config.OUTPUT_DIR,
        )
        return written
