"""CLI entry point for frustra.

Subcommands:
- run          sampled consensus metrics
- oracle       exhaustive metrics plus the frustration cloud (small graphs)
- count-trees  exact spanning-tree count per selected component

Precedence: CLI flags > config file (--config) > environment > defaults.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from . import __version__
from .config import INPUT_FORMATS, Config
from .errors import CapacityError, FrustraError, ParseError
from .ingestion import EdgeListIngester
from .logger import configure_logging, get_logger
from .models import ComponentPolicy, SamplerKind, SymmetrizationPolicy, TieAgreement
from .pipeline import run_oracle, run_pipeline, select_components
from .sampler import count_spanning_trees

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_INTERRUPTED = 130


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Path to config file (TOML or JSON)")
    common.add_argument("--log-level", help="Logging level (default: INFO)")
    common.add_argument("--log-format", choices=["json", "text"], help="Log line format")
    common.add_argument("--input", type=Path, help="Sentiment file")
    common.add_argument("--format", dest="format", choices=INPUT_FORMATS, help="Input layout")
    common.add_argument(
        "--symmetrization",
        choices=[p.value for p in SymmetrizationPolicy],
        help="How opposite directed sentiments collapse (default: sum)",
    )
    common.add_argument(
        "--component",
        choices=[p.value for p in ComponentPolicy],
        help="Analyze the largest component only or every component",
    )
    return common


def _metrics_parser() -> argparse.ArgumentParser:
    metrics = argparse.ArgumentParser(add_help=False)
    metrics.add_argument("--tie-break", help="Vertex label whose side wins tied states")
    metrics.add_argument(
        "--raw-influence",
        action="store_true",
        default=None,
        help="Report summed instead of degree-averaged influence",
    )
    metrics.add_argument(
        "--tie-agreement",
        choices=[t.value for t in TieAgreement],
        help="Edge credit on tied states (default: zero-cut)",
    )
    metrics.add_argument("--out", type=Path, help="Output directory")
    return metrics


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frustra", description="frustra - signed-graph consensus analytics"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common, metrics = _common_parser(), _metrics_parser()

    run = sub.add_parser("run", parents=[common, metrics], help="Sampled consensus metrics")
    run.add_argument(
        "--sampler", choices=[k.value for k in SamplerKind], help="Spanning-tree sampler"
    )
    run.add_argument("--trees", type=int, help="Number of spanning trees to sample")
    run.add_argument("--seed", type=int, help="Seed of the per-tree random streams")
    run.add_argument("--workers", type=int, help="Worker processes")

    oracle = sub.add_parser(
        "oracle", parents=[common, metrics], help="Exhaustive metrics for small graphs"
    )
    oracle.add_argument("--max-trees", type=int, help="Spanning-tree enumeration cap")
    oracle.add_argument("--max-vertices", type=int, help="Balanced-state enumeration cap")

    count = sub.add_parser("count-trees", parents=[common], help="Exact spanning-tree count")
    count.add_argument(
        "--max-vertices",
        dest="count_max_vertices",
        type=int,
        help="Largest component counted (default: 2000)",
    )
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    raw_influence = getattr(args, "raw_influence", None)
    return {
        "INPUT_PATH": args.input,
        "INPUT_FORMAT": args.format,
        "SYMMETRIZATION": args.symmetrization,
        "COMPONENT_POLICY": args.component,
        "SAMPLER": getattr(args, "sampler", None),
        "TREES": getattr(args, "trees", None),
        "SEED": getattr(args, "seed", None),
        "WORKERS": getattr(args, "workers", None),
        "TIE_BREAK": getattr(args, "tie_break", None),
        "INFLUENCE_NORMALIZED": None if raw_influence is None else not raw_influence,
        "TIE_AGREEMENT": getattr(args, "tie_agreement", None),
        "OUTPUT_DIR": getattr(args, "out", None),
        "ORACLE_MAX_TREES": getattr(args, "max_trees", None),
        "ORACLE_MAX_VERTICES": getattr(args, "max_vertices", None),
        "COUNT_MAX_VERTICES": getattr(args, "count_max_vertices", None),
        "LOG_LEVEL": args.log_level,
        "LOG_FORMAT": args.log_format,
    }


def load_config(args: argparse.Namespace) -> Config:
    overrides = _overrides(args)
    if args.config:
        config = Config.from_file(args.config, overrides)
        logger.info("Loaded config file: %s", args.config)
    else:
        config = Config.from_overrides(overrides)
    configure_logging(config.LOG_LEVEL, config.LOG_FORMAT)
    config.validate()
    if config.INPUT_PATH is None:
        raise FileNotFoundError("No input file (use --input or 'input' in the config file)")
    return config


def _count_trees(config: Config) -> None:
    graph = EdgeListIngester(config).load_graph()
    components = select_components(graph, config.component_policy)
    for index, component in enumerate(components):
        count = count_spanning_trees(component, config.COUNT_MAX_VERTICES)
        if len(components) == 1:
            print(count)
        else:
            print(f"component-{index + 1:03d} {count}")


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Main CLI entry point"""
    args = build_parser().parse_args(argv)
    if args.log_level or args.log_format:
        configure_logging(args.log_level or "INFO", args.log_format or "json")

    try:
        config = load_config(args)
        logger.info(
            "Starting %s", args.command, extra={"meta": {"input": str(config.INPUT_PATH)}}
        )
        if args.command == "run":
            run_pipeline(config)
        elif args.command == "oracle":
            run_oracle(config)
        else:
            _count_trees(config)
    except ParseError as e:
        logger.error("Parse error: %s", e)
        sys.exit(EXIT_PARSE)
    except CapacityError as e:
        logger.error("Capacity exceeded: %s", e)
        sys.exit(EXIT_CAPACITY)
    except (FrustraError, ValueError, OSError, RuntimeError) as e:
        logger.error("Run failed: %s", e)
        sys.exit(EXIT_FAILURE)
    except KeyboardInterrupt:
        logger.warning("Run interrupted by user")
        sys.exit(EXIT_INTERRUPTED)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
