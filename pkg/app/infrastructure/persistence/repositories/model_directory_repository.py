# app/infrastructure/persistence/repositories/model_directory_repository.py
from pathlib import Path
from typing import Dict, Tuple

from app.config.logging_config import logger
from app.domain.entities.pipeline import TokenPipelineConfig
from app.domain.exceptions import CorpusFileNotFoundException
from app.domain.repositories.model_repository import IModelRepository
from app.infrastructure.models.trained_model import TrainedModel
from app.infrastructure.persistence.model_store import load_model, save_model
from app.infrastructure.persistence.vocabulary_store import (
    load_pipeline,
    load_vocabulary,
    save_pipeline,
    save_vocabulary,
)

MODEL_FILE = "model.bin"
VOCABULARY_FILE = "vocabulary.tsv"
PIPELINE_FILE = "pipeline.json"


class ModelDirectoryRepository(IModelRepository):
    def save(self, trained_model: TrainedModel, pipeline: TokenPipelineConfig, directory: Path) -> Dict[str, Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        return {
            "model": save_model(trained_model, directory / MODEL_FILE),
            "vocabulary": save_vocabulary(trained_model.vocabulary, directory / VOCABULARY_FILE),
            "pipeline": save_pipeline(pipeline, directory / PIPELINE_FILE),
        }

    def load(self, directory: Path, strict: bool = True) -> Tuple[TrainedModel, TokenPipelineConfig]:
        directory = Path(directory)
        for name in (MODEL_FILE, VOCABULARY_FILE, PIPELINE_FILE):
            if not (directory / name).is_file():
                raise CorpusFileNotFoundException(directory / name)
        vocabulary = load_vocabulary(directory / VOCABULARY_FILE)
        pipeline = load_pipeline(directory / PIPELINE_FILE)
        model = load_model(directory / MODEL_FILE, vocabulary, pipeline.config_hash(), strict=strict)
        logger.info(f"[MODEL-STORE] Loaded {model.spec.architecture} model from {directory}")
        return model, pipeline
