# app/infrastructure/persistence/repositories/csv_corpus_repository.py
import csv
import io
import re
from pathlib import Path
from typing import List, Sequence

import pandas as pd

from app.config.logging_config import logger
from app.domain.entities.corpus import CorpusSchema, LabeledCorpus, Sample
from app.domain.entities.labels import parse_label
from app.domain.entities.pipeline import TokenSequence
from app.domain.exceptions import CorpusFileNotFoundException, MalformedRowException
from app.domain.repositories.corpus_repository import ICorpusRepository

_PARSER_LINE = re.compile(r"line (\d+)")


def _read_text(path: Path) -> str:
    """UTF-8 with an optional BOM; decode errors carry the physical line number."""
    if not path.is_file():
        raise CorpusFileNotFoundException(path)
    raw = path.read_bytes()
    try:
        return raw.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        raise MalformedRowException(raw[:e.start].count(b"\n") + 1, "invalid UTF-8") from e


def record_lines(text: str) -> List[int]:
    """Physical line on which each data record starts; quoted fields may span lines, blank lines are skipped."""
    starts, consumed = [], 0
    reader = csv.reader(io.StringIO(text, newline=""))
    for row in reader:
        if row:
            starts.append(consumed + 1)
        consumed = reader.line_num
    return starts[1:]


def read_frame(path: Path, required: Sequence[str]) -> pd.DataFrame:
    """All-string frame of a headed CSV; raises MalformedRow for ragged or headerless input."""
    text = _read_text(path)
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as e:
        raise MalformedRowException(1, "missing header row") from e
    except pd.errors.ParserError as e:
        match = _PARSER_LINE.search(str(e))
        raise MalformedRowException(int(match.group(1)) if match else 0, "wrong column count") from e

    if not isinstance(frame.index, pd.RangeIndex):
        # pandas turns a surplus first column into an index instead of failing
        raise MalformedRowException(2, "wrong column count")
    try:
        lines = record_lines(text)
    except csv.Error:
        lines = []
    # index each record by its physical line; header is line 1
    frame.index = pd.Index(lines if len(lines) == len(frame) else range(2, len(frame) + 2), name="line_no")

    missing = [column for column in required if column not in frame.columns]
    if missing:
        raise MalformedRowException(1, f"header is missing column(s) {missing}")
    short_rows = frame[list(required)].isna().any(axis=1)
    if short_rows.any():
        raise MalformedRowException(int(short_rows.idxmax()), "wrong column count")
    return frame


class CsvCorpusRepository(ICorpusRepository):
    def load(self, path: Path, schema: CorpusSchema = CorpusSchema()) -> LabeledCorpus:
        path = Path(path)
        frame = read_frame(path, [schema.text_column, schema.label_column])
        samples = []
        for line_no, text, label in zip(frame.index.tolist(), frame[schema.text_column], frame[schema.label_column]):
            if not text.strip():
                raise MalformedRowException(line_no, "empty text")
            samples.append(Sample(text=text, label=parse_label(label, line_no=line_no)))
        logger.info(f"[CORPUS] Loaded {len(samples)} samples from {path}")
        return LabeledCorpus(samples=tuple(samples), source=str(path))

    def load_texts(self, path: Path, column: str = "text") -> List[str]:
        return read_frame(Path(path), [column])[column].tolist()

    def save(self, corpus: LabeledCorpus, path: Path) -> Path:
        frame = pd.DataFrame({
            "text": corpus.texts,
            "label": [sample.label.display_name for sample in corpus.samples],
        })
        return self._write(frame, path)

    def save_preprocessed(self, corpus: LabeledCorpus, tokens: Sequence[TokenSequence], path: Path) -> Path:
        frame = pd.DataFrame({
            "text": corpus.texts,
            "tokens": [" ".join(doc) for doc in tokens],
            "label": [sample.label.display_name for sample in corpus.samples],
        })
        return self._write(frame, path)

    @staticmethod
    def _write(frame: pd.DataFrame, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
        return path
