"""
Commands for the classification workflow.

Immutable command objects; each validates its own fields on construction.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

from app.config.run_config import RunConfig
from app.domain.entities.model_spec import ARCHITECTURES

OUTPUT_FORMATS = ("text", "json-lines")


@dataclass(frozen=True)
class ResourcePaths:
    """Optional replacements for the shipped stopword, stem-rule and emot files."""
    stopwords: Optional[Path] = None
    stem_rules: Optional[Path] = None
    emots: Optional[Path] = None


@dataclass(frozen=True)
class PreprocessCommand:
    """Run the token pipeline over a labelled CSV and write text, tokens, label"""
    data: Path
    out: Path
    resources: ResourcePaths = field(default_factory=ResourcePaths)
    config: RunConfig = field(default_factory=RunConfig)

    def __post_init__(self):
        if not str(self.data):
            raise ValueError("Input CSV path is required")
        if not str(self.out):
            raise ValueError("Output CSV path is required")
        if Path(self.out).resolve() == Path(self.data).resolve():
            raise ValueError("Output path must differ from the input path")


@dataclass(frozen=True)
class FitFeaturesCommand:
    """Fit the prune set and vocabulary on the training split and export TF-IDF vectors"""
    data: Path
    out_dir: Path
    resources: ResourcePaths = field(default_factory=ResourcePaths)
    config: RunConfig = field(default_factory=RunConfig)

    def __post_init__(self):
        if not str(self.data):
            raise ValueError("Input CSV path is required")
        if not str(self.out_dir):
            raise ValueError("Output directory is required")


@dataclass(frozen=True)
class TrainCommand:
    """Split, preprocess, train one architecture, evaluate on the held-out split"""
    data: Path
    architecture: str
    out_dir: Path
    resources: ResourcePaths = field(default_factory=ResourcePaths)
    config: RunConfig = field(default_factory=RunConfig)

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"Architecture must be one of {', '.join(ARCHITECTURES)}; got {self.architecture!r}")
        if not str(self.out_dir):
            raise ValueError("Output directory is required")


@dataclass(frozen=True)
class EvaluateCommand:
    """Score a trained model directory against a labelled CSV"""
    model_dir: Path
    data: Path
    out_dir: Optional[Path] = None

    def __post_init__(self):
        if not str(self.model_dir):
            raise ValueError("Model directory is required")


@dataclass(frozen=True)
class PredictCommand:
    """Classify raw texts given inline or as the text column of a CSV"""
    model_dir: Path
    texts: Tuple[str, ...] = ()
    data: Optional[Path] = None

    def __post_init__(self):
        if not self.texts and self.data is None:
            raise ValueError("Provide at least one text or a CSV file")
        if self.texts and self.data is not None:
            raise ValueError("Provide either texts or a CSV file, not both")


@dataclass(frozen=True)
class ReportCommand:
    """Compare finished runs: architecture, memory, training time, accuracy and per-class F1"""
    run_dirs: Tuple[Path, ...]
    out_dir: Optional[Path] = None
    svg: bool = False

    def __post_init__(self):
        if not self.run_dirs:
            raise ValueError("At least one run directory is required")
        if self.svg and self.out_dir is None:
            raise ValueError("Writing SVG charts needs an output directory")


@dataclass(frozen=True)
class ExportPlotsCommand:
    """Render a history CSV as a two-series SVG line chart"""
    history: Path
    out_dir: Path
    metric: str = "acc"

    def __post_init__(self):
        if self.metric not in ("acc", "loss"):
            raise ValueError(f"Metric must be 'acc' or 'loss'; got {self.metric!r}")
