# app/domain/repositories/resource_repository.py
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

from app.domain.entities.pipeline import EmotDictionary, StemRuleTable, StopwordSet, TokenPipelineConfig


class IResourceRepository(ABC):
    @abstractmethod
    def load_stopwords(self, path: Optional[Path] = None) -> StopwordSet:
        pass

    @abstractmethod
    def load_stem_rules(self, path: Optional[Path] = None) -> StemRuleTable:
        pass

    @abstractmethod
    def load_emot_dictionary(self, path: Optional[Path] = None) -> EmotDictionary:
        pass

    @abstractmethod
    def load_pipeline_config(
        self,
        stopwords: Optional[Path] = None,
        stem_rules: Optional[Path] = None,
        emots: Optional[Path] = None,
        **options,
    ) -> TokenPipelineConfig:
        pass
