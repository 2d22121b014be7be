# app/domain/repositories/corpus_repository.py
from abc import ABC, abstractmethod
from pathlib import Path
from typing import List, Sequence

from app.domain.entities.corpus import CorpusSchema, LabeledCorpus
from app.domain.entities.pipeline import TokenSequence


class ICorpusRepository(ABC):
    @abstractmethod
    def load(self, path: Path, schema: CorpusSchema = CorpusSchema()) -> LabeledCorpus:
        pass

    @abstractmethod
    def save(self, corpus: LabeledCorpus, path: Path) -> Path:
        pass

    @abstractmethod
    def save_preprocessed(self, corpus: LabeledCorpus, tokens: Sequence[TokenSequence], path: Path) -> Path:
        pass

    @abstractmethod
    def load_texts(self, path: Path, column: str = "text") -> List[str]:
        pass
