# app/infrastructure/persistence/artifact_writer.py
"""History CSV, evaluation reports, manifests and TF-IDF exports."""
import json
from pathlib import Path
from typing import Iterable, List

import pandas as pd

from app.domain.entities.model_spec import EpochRecord, EvalReport, RunManifest, TrainingHistory
from app.domain.exceptions import CorpusFileNotFoundException, MalformedRowException
from app.infrastructure.persistence.repositories.csv_corpus_repository import read_frame
from app.infrastructure.persistence.vocabulary_store import canonical_json

HISTORY_COLUMNS = ["epoch", "train_loss", "train_acc", "val_loss", "val_acc"]


def _prepare(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_history_csv(history: TrainingHistory, path: Path) -> Path:
    frame = pd.DataFrame([record.model_dump() for record in history.epochs], columns=HISTORY_COLUMNS)
    path = _prepare(path)
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    return path


def read_history_csv(path: Path) -> List[EpochRecord]:
    frame = read_frame(Path(path), HISTORY_COLUMNS)
    try:
        return [
            EpochRecord(epoch=int(row.epoch), train_loss=float(row.train_loss), train_acc=float(row.train_acc),
                        val_loss=float(row.val_loss), val_acc=float(row.val_acc))
            for row in frame.itertuples(index=False)
        ]
    except ValueError as e:
        raise MalformedRowException(0, f"history CSV has a non-numeric value: {e}") from e


def write_json(payload, path: Path) -> Path:
    path = _prepare(path)
    path.write_text(canonical_json(payload), encoding="utf-8", newline="\n")
    return path


def write_report_json(report: EvalReport, path: Path) -> Path:
    return write_json(report.model_dump(mode="json"), path)


def read_report_json(path: Path) -> EvalReport:
    path = Path(path)
    if not path.is_file():
        raise CorpusFileNotFoundException(path)
    return EvalReport(**json.loads(path.read_text(encoding="utf-8-sig")))


def write_text(text: str, path: Path) -> Path:
    path = _prepare(path)
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


def write_manifest(manifest: RunManifest, path: Path) -> Path:
    return write_json(manifest.model_dump(mode="json"), path)


def write_json_lines(rows: Iterable[dict], path: Path) -> Path:
    path = _prepare(path)
    lines = [json.dumps(row, sort_keys=True, ensure_ascii=False) for row in rows]
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8", newline="\n")
    return path
