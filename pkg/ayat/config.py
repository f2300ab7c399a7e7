import argparse
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from ayat.analytics import DEFAULT_INFLUENTIAL_K, DEFAULT_TOP_N, WeightMode
from ayat.corpus import CORPUS_FORMATS
from ayat.errors import ConfigError
from ayat.matcher import DEFAULT_MIN_TOKENS

DEFAULT_INDEX_NAME = "index.sqlite"


@dataclass(frozen=True)
class PipelineConfig:
    """Settings shared by every subcommand, as parsed from the command line."""

    corpus_path: Optional[Path] = None
    categories_path: Optional[Path] = None
    apps_path: Optional[Path] = None
    phrases_path: Optional[Path] = None
    index_path: Optional[Path] = None
    labels_path: Optional[Path] = None
    out_dir: Path = Path(".")
    corpus_format: str = "tanzil-pipe"
    allow_incomplete: bool = False
    min_tokens: int = DEFAULT_MIN_TOKENS
    allow_short_matches: bool = False
    full_suppresses_fragments: bool = False
    weight_mode: str = WeightMode.VOLUME.value
    distinct_verses: bool = False
    seed: int = 0
    strict: bool = False
    workers: int = 1
    top_n: int = DEFAULT_TOP_N
    influential_k: int = DEFAULT_INFLUENTIAL_K
    hashtags: Tuple[str, ...] = field(default_factory=tuple)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "PipelineConfig":
        """Pick the known fields off ``args``; missing ones keep their defaults."""
        values: Dict[str, Any] = {}
        for f in fields(cls):
            value = getattr(args, f.name, None)
            if value is None:
                continue
            if f.name.endswith("_path") or f.name == "out_dir":
                value = Path(value)
            elif f.name == "hashtags":
                value = tuple(value)
            values[f.name] = value
        config = cls(**values)
        config.validate()
        return config

    def validate(self) -> None:
        if self.min_tokens < 2:
            raise ConfigError(f"--min-tokens must be at least 2, got {self.min_tokens}")
        if self.min_tokens < DEFAULT_MIN_TOKENS and not self.allow_short_matches:
            raise ConfigError(
                f"--min-tokens {self.min_tokens} is below {DEFAULT_MIN_TOKENS}; "
                "pass --allow-short-matches to accept it"
            )
        if self.weight_mode not in {mode.value for mode in WeightMode}:
            raise ConfigError(f"unknown weight mode {self.weight_mode!r}")
        if self.corpus_format not in CORPUS_FORMATS:
            raise ConfigError(f"unknown corpus format {self.corpus_format!r}")
        for name in ("workers", "top_n", "influential_k"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1, got {getattr(self, name)}")

    @property
    def weight(self) -> WeightMode:
        return WeightMode(self.weight_mode)

    @property
    def resolved_index_path(self) -> Path:
        return self.index_path or self.out_dir / DEFAULT_INDEX_NAME

    def echo(self) -> Dict[str, Any]:
        """JSON-ready view of the settings that shape results.

        Paths are reduced to file names; the output directory and worker count
        are left out so bundles from different runs compare equal.
        """
        echoed: Dict[str, Any] = {}
        for f in fields(self):
            if f.name in ("out_dir", "workers"):
                continue
            value = getattr(self, f.name)
            if isinstance(value, Path):
                value = value.name
            elif isinstance(value, tuple):
                value = list(value)
            echoed[f.name] = value
        return echoed
