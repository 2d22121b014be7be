# app/infrastructure/persistence/repositories/file_resource_repository.py
import csv
from pathlib import Path
from typing import List, Optional

import pandas as pd

from app.config.logging_config import logger
from app.config.settings import settings
from app.domain.entities.pipeline import EmotDictionary, StemRule, StemRuleTable, StopwordSet, TokenPipelineConfig
from app.domain.exceptions import CorpusFileNotFoundException, MalformedRowException
from app.domain.repositories.resource_repository import IResourceRepository
from app.infrastructure.metadata.resources_description import resource_entry


def _record_lines(text: str, has_header: bool) -> List[int]:
    """Line numbers of the rows pandas keeps: not blank once a '#' comment is cut off."""
    numbers = [
        number for number, line in enumerate(text.split("\n"), start=1)
        if line.split("#", 1)[0].strip()
    ]
    return numbers[1:] if has_header else numbers


def _read_table(path: Path, columns, has_header: bool) -> pd.DataFrame:
    """Tab-separated, no quoting (emoticons contain quote characters), '#' starts a comment.

    Rows are indexed by their physical line number.
    """
    if not path.is_file():
        raise CorpusFileNotFoundException(path)
    frame = pd.read_csv(
        path,
        sep="\t",
        header=0 if has_header else None,
        names=columns,
        comment="#",
        quoting=csv.QUOTE_NONE,
        dtype=str,
        keep_default_na=False,
        skip_blank_lines=True,
        encoding="utf-8-sig",
    ).fillna("")
    lines = _record_lines(path.read_text(encoding="utf-8-sig"), has_header)
    first = 2 if has_header else 1
    frame.index = pd.Index(lines if len(lines) == len(frame) else range(first, len(frame) + first), name="line_no")
    return frame


class FileResourceRepository(IResourceRepository):
    def __init__(self, resources_dir: Optional[Path] = None):
        self.resources_dir = Path(resources_dir) if resources_dir is not None else settings.RESOURCES_DIR

    def _resolve(self, name: str, path: Optional[Path]) -> Path:
        return Path(path) if path is not None else self.resources_dir / resource_entry(name)["filename"]

    def _table(self, name: str, path: Optional[Path]) -> pd.DataFrame:
        entry = resource_entry(name)
        return _read_table(self._resolve(name, path), entry["columns"], entry["has_header"])

    def load_stopwords(self, path: Optional[Path] = None) -> StopwordSet:
        frame = self._table("stopwords", path)
        words = frozenset(word.strip() for word in frame["word"] if word.strip())
        return StopwordSet(words=words)

    def load_stem_rules(self, path: Optional[Path] = None) -> StemRuleTable:
        frame = self._table("stem_rules", path)
        rules, exceptions = [], {}
        for line_no, row in zip(frame.index.tolist(), frame.itertuples(index=False)):
            category = row.category.strip()
            if category == "exception":
                # exception rows: category, surface form, root
                if not row.suffix or not row.replacement:
                    raise MalformedRowException(line_no, "exception rows need a surface form and a root")
                exceptions[row.suffix] = row.replacement
                continue
            try:
                rules.append(StemRule(
                    category=category,
                    suffix=row.suffix,
                    replacement=row.replacement,
                    min_stem_length=int(row.min_stem_length or 1),
                ))
            except ValueError as e:
                raise MalformedRowException(line_no, f"invalid stem rule: {e}") from e
        try:
            return StemRuleTable(rules=tuple(rules), exceptions=exceptions)
        except ValueError as e:
            raise MalformedRowException(0, str(e)) from e

    def load_emot_dictionary(self, path: Optional[Path] = None) -> EmotDictionary:
        frame = self._table("emots", path)
        duplicated = frame["key"].duplicated()
        if duplicated.any():
            raise MalformedRowException(int(duplicated.idxmax()), "duplicate emot key")
        try:
            return EmotDictionary(
                entries=dict(zip(frame["key"], frame["bangla_word"])),
                glosses=dict(zip(frame["key"], frame["english_gloss"])),
            )
        except ValueError as e:
            raise MalformedRowException(0, str(e)) from e

    def load_pipeline_config(
        self,
        stopwords: Optional[Path] = None,
        stem_rules: Optional[Path] = None,
        emots: Optional[Path] = None,
        **options,
    ) -> TokenPipelineConfig:
        config = TokenPipelineConfig(
            stopwords=self.load_stopwords(stopwords),
            stem_rules=self.load_stem_rules(stem_rules),
            emots=self.load_emot_dictionary(emots),
            **options,
        )
        logger.info(f"[RESOURCES] {len(config.stopwords)} stopwords, {len(config.stem_rules.rules)} stem rules, "
                    f"{len(config.stem_rules.exceptions)} exceptions, {len(config.emots.entries)} emots")
        return config
