# app/infrastructure/persistence/vocabulary_store.py
"""Vocabulary TSV and pipeline snapshot JSON."""
import csv
import io
import json
import re
from pathlib import Path

import pandas as pd

from app.domain.entities.pipeline import TokenPipelineConfig
from app.domain.entities.vocabulary import Vocabulary
from app.domain.exceptions import CorpusFileNotFoundException, FormatVersionMismatchException, MalformedRowException

VOCABULARY_FORMAT_VERSION = 1
PIPELINE_FORMAT_VERSION = 1
_HEADER = re.compile(r"^# format_version=(\d+)\tN=(\d+)$")


def _require_file(path: Path) -> Path:
    path = Path(path)
    if not path.is_file():
        raise CorpusFileNotFoundException(path)
    return path


def save_vocabulary(vocab: Vocabulary, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(vocab.to_tsv(VOCABULARY_FORMAT_VERSION), encoding="utf-8", newline="\n")
    return path


def load_vocabulary(path: Path) -> Vocabulary:
    text = _require_file(path).read_text(encoding="utf-8-sig")
    first_line, _, body = text.partition("\n")
    header = _HEADER.match(first_line.rstrip("\r"))
    if header is None:
        raise MalformedRowException(1, "vocabulary header must be '# format_version=<v>\\tN=<N>'")
    version, corpus_size = int(header.group(1)), int(header.group(2))
    if version != VOCABULARY_FORMAT_VERSION:
        raise FormatVersionMismatchException(
            f"vocabulary format version {version}, expected {VOCABULARY_FORMAT_VERSION}"
        )
    frame = pd.read_csv(io.StringIO(body), sep="\t", quoting=csv.QUOTE_NONE, dtype=str, keep_default_na=False)
    try:
        return Vocabulary(
            term_to_index={term: int(index) for term, index in zip(frame["term"], frame["index"])},
            document_frequency={term: int(df) for term, df in zip(frame["term"], frame["document_frequency"])},
            corpus_size=corpus_size,
        )
    except (KeyError, ValueError) as e:
        raise MalformedRowException(2, f"invalid vocabulary table: {e}") from e


def canonical_json(payload) -> str:
    """Sorted keys, fixed separators, UTF-8 text: stable across runs and diffs."""
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def save_pipeline(config: TokenPipelineConfig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(config.to_snapshot()), encoding="utf-8", newline="\n")
    return path


def load_pipeline(path: Path) -> TokenPipelineConfig:
    snapshot = json.loads(_require_file(path).read_text(encoding="utf-8-sig"))
    version = snapshot.get("format_version")
    if version != PIPELINE_FORMAT_VERSION:
        raise FormatVersionMismatchException(
            f"pipeline snapshot format version {version}, expected {PIPELINE_FORMAT_VERSION}"
        )
    return TokenPipelineConfig.from_snapshot(snapshot)
