# app/domain/repositories/model_repository.py
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Tuple

from app.domain.entities.pipeline import TokenPipelineConfig


class IModelRepository(ABC):
    """Trained-model directories: model file, vocabulary and pipeline snapshot side by side."""

    @abstractmethod
    def save(self, trained_model: Any, pipeline: TokenPipelineConfig, directory: Path) -> Dict[str, Path]:
        pass

    @abstractmethod
    def load(self, directory: Path, strict: bool = True) -> Tuple[Any, TokenPipelineConfig]:
        pass
