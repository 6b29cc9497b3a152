"""Configuration module for frustra"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional

try:  # Python 3.11+
    import tomllib  # type: ignore
except ImportError:  # pragma: no cover
    tomllib = None  # type: ignore

from .errors import ConfigError
from .models import ComponentPolicy, SamplerKind, SymmetrizationPolicy, TieAgreement

INPUT_FORMATS = ("edgelist", "wiki-elec")


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name, "").strip()
    try:
        return int(value) if value else default
    except ValueError:
        return default


@dataclass
class Config:
    """Run configuration for sampling, oracle and tree-count commands"""

    # Input
    INPUT_PATH: Optional[Path] = None
    INPUT_FORMAT: str = "edgelist"
    SYMMETRIZATION: str = SymmetrizationPolicy.SUM.value

    # Sampling
    SAMPLER: str = SamplerKind.BREADTH_FIRST.value
    TREES: int = 1000
    SEED: int = _env_int("FRUSTRA_SEED", 0)
    WORKERS: int = _env_int("FRUSTRA_WORKERS", 1)

    # Metrics
    TIE_BREAK: Optional[str] = None  # original vertex label
    COMPONENT_POLICY: str = ComponentPolicy.LARGEST.value
    INFLUENCE_NORMALIZED: bool = True
    TIE_AGREEMENT: str = TieAgreement.ZERO_CUT.value

    # Exhaustive oracle caps
    ORACLE_MAX_TREES: int = 1_000_000
    ORACLE_MAX_VERTICES: int = 20
    COUNT_MAX_VERTICES: int = 2000  # dense Laplacian for count-trees

    # Output
    OUTPUT_DIR: Path = Path("./out")

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FORMAT: str = os.getenv("LOG_FORMAT", "json")  # or "text"

    def __post_init__(self):
        if self.INPUT_PATH is not None:
            self.INPUT_PATH = Path(self.INPUT_PATH).expanduser()
        self.OUTPUT_DIR = Path(self.OUTPUT_DIR).expanduser()
        if self.TIE_BREAK is not None:
            self.TIE_BREAK = str(self.TIE_BREAK).strip() or None

    @property
    def sampler_kind(self) -> SamplerKind:
        return SamplerKind.parse(self.SAMPLER)

    @property
    def tie_agreement(self) -> TieAgreement:
        return TieAgreement.parse(self.TIE_AGREEMENT)

    @property
    def component_policy(self) -> ComponentPolicy:
        return ComponentPolicy.parse(self.COMPONENT_POLICY)

    def validate(self) -> None:
        """
        Validate the configuration and normalize enum spellings.
        """
        errors = []
        for attr, enum in (
            ("SAMPLER", SamplerKind),
            ("SYMMETRIZATION", SymmetrizationPolicy),
            ("COMPONENT_POLICY", ComponentPolicy),
            ("TIE_AGREEMENT", TieAgreement),
        ):
            try:
                setattr(self, attr, enum.parse(getattr(self, attr)).value)
            except ValueError as exc:
                errors.append(str(exc))
        if self.INPUT_FORMAT not in INPUT_FORMATS:
            errors.append(f"INPUT_FORMAT must be one of {', '.join(INPUT_FORMATS)}")
        if self.INPUT_PATH is not None and not self.INPUT_PATH.exists():
            errors.append(f"Input file not found: {self.INPUT_PATH}")
        if not isinstance(self.TREES, int) or self.TREES < 1:
            errors.append("TREES must be >=1")
        if not isinstance(self.WORKERS, int) or self.WORKERS < 1:
            errors.append("WORKERS must be >=1")
        if not isinstance(self.SEED, int):
            errors.append("SEED must be an integer")
        if min(self.ORACLE_MAX_TREES, self.ORACLE_MAX_VERTICES, self.COUNT_MAX_VERTICES) < 1:
            errors.append("Oracle and count caps must be >=1")
        if errors:
            raise ConfigError("Config validation errors:\n- " + "\n- ".join(errors))

    def to_dict(self) -> Dict[str, Any]:
        """Convert the config to a JSON-friendly dictionary."""
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, Path):
                d[k] = str(v)
        return d

    @classmethod
    def from_file(cls, path: str | Path, overrides: Optional[Dict[str, Any]] = None) -> "Config":
        """Load configuration from a TOML or JSON file.

        Args:
            path (str | Path): Path to the configuration file.
            overrides (Optional[Dict[str, Any]], optional): Values that win over the file
                (CLI flags). ``None`` values are ignored. Defaults to None.

        Raises:
            FileNotFoundError: The file does not exist.
            ConfigError: Unsupported format or unknown keys.

        Returns:
            Config: The merged configuration (not yet validated).
        """
        p = Path(path)
        if not p.exists():
            raise FileNotFoundError(f"Config file not found: {p}")
        suffix = p.suffix.lower()
        if suffix in {".toml", ".tml"}:
            if tomllib is None:
                raise ConfigError("tomllib not available (Python <3.11).")
            data = tomllib.loads(p.read_text(encoding="utf-8"))
        elif suffix == ".json":
            data = json.loads(p.read_text(encoding="utf-8"))
        else:
            raise ConfigError("Unsupported config format (use .toml or .json)")

        flat = _coerce_types(_flatten_keys(data))
        if overrides:
            flat.update(_coerce_types({k: v for k, v in overrides.items() if v is not None}))
        return cls(**flat)

    @classmethod
    def from_overrides(cls, overrides: Dict[str, Any]) -> "Config":
        """Defaults plus the non-None overrides (no config file)"""
        return cls(**_coerce_types({k: v for k, v in overrides.items() if v is not None}))


def _flatten_keys(d: Dict[str, Any], parent: str = "", sep: str = ".") -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for k, v in d.items():
        key = f"{parent}{sep}{k}" if parent else k
        if isinstance(v, dict):
            out.update(_flatten_keys(v, key, sep))
        else:
            out[key] = v
    # Tables only group keys; the last component names the field
    return {k.split(sep)[-1]: v for k, v in out.items()}


_FIELD_MAPPINGS = {
    "input": "INPUT_PATH",
    "input_path": "INPUT_PATH",
    "format": "INPUT_FORMAT",
    "input_format": "INPUT_FORMAT",
    "symmetrization": "SYMMETRIZATION",
    "sampler": "SAMPLER",
    "trees": "TREES",
    "seed": "SEED",
    "workers": "WORKERS",
    "tie_break": "TIE_BREAK",
    "component": "COMPONENT_POLICY",
    "component_policy": "COMPONENT_POLICY",
    "influence_normalized": "INFLUENCE_NORMALIZED",
    "tie_agreement": "TIE_AGREEMENT",
    "oracle_max_trees": "ORACLE_MAX_TREES",
    "oracle_max_vertices": "ORACLE_MAX_VERTICES",
    "count_max_vertices": "COUNT_MAX_VERTICES",
    "out": "OUTPUT_DIR",
    "output_dir": "OUTPUT_DIR",
    "log_level": "LOG_LEVEL",
    "log_format": "LOG_FORMAT",
}

_INT_FIELDS = {
    "TREES",
    "SEED",
    "WORKERS",
    "ORACLE_MAX_TREES",
    "ORACLE_MAX_VERTICES",
    "COUNT_MAX_VERTICES",
}
_BOOL_FIELDS = {"INFLUENCE_NORMALIZED"}
_PATH_FIELDS = {"INPUT_PATH", "OUTPUT_DIR"}


def _coerce_types(data: Dict[str, Any]) -> Dict[str, Any]:
    known = {f.name for f in fields(Config)}
    out: Dict[str, Any] = {}
    for key, value in data.items():
        name = _FIELD_MAPPINGS.get(key, key)
        if name not in known:
            upper = str(key).upper()
            if upper not in known:
                raise ConfigError(f"Unknown configuration key: {key}")
            name = upper
        out[name] = value

    for f in _INT_FIELDS:
        if f in out and isinstance(out[f], str):
            try:
                out[f] = int(out[f].strip())
            except ValueError:
                raise ConfigError(f"{f} must be an integer, got {out[f]!r}") from None
    for f in _BOOL_FIELDS:
        if f in out and isinstance(out[f], str):
            out[f] = out[f].lower() in {"1", "true", "yes", "on"}
    for f in _PATH_FIELDS:
        if f in out and out[f] not in (None, ""):
            out[f] = Path(str(out[f])).expanduser()
    if "TIE_BREAK" in out and out["TIE_BREAK"] is not None:
        out["TIE_BREAK"] = str(out["TIE_BREAK"])
    return out
