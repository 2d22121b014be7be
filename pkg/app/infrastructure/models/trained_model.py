# app/infrastructure/models/trained_model.py
from dataclasses import dataclass
from typing import Optional

from app.domain.entities.model_spec import TrainingHistory
from app.domain.entities.vocabulary import Vocabulary
from app.infrastructure.models.classifier import EncoderDecoderClassifier


@dataclass
class TrainedModel:
    """A classifier together with the vocabulary it was trained on and the pipeline hash it expects."""

    classifier: EncoderDecoderClassifier
    vocabulary: Vocabulary
    pipeline_hash: str
    history: Optional[TrainingHistory] = None

    @property
    def spec(self):
        return self.classifier.spec

    @property
    def vocab_hash(self) -> str:
        return self.vocabulary.content_hash()
