# app/infrastructure/models/predictor.py
from typing import List, Sequence

from pydantic import BaseModel, ConfigDict

from app.domain.entities.labels import ClassLabel
from app.domain.entities.pipeline import TokenPipelineConfig
from app.domain.services.preprocessing import run_pipeline
from app.domain.services.vectorizer import encode_batch
from app.infrastructure.models.evaluator import predict_labels
from app.infrastructure.models.trained_model import TrainedModel


class Prediction(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: ClassLabel
    distribution: List[float]
    empty_after_preprocessing: bool = False


def predict_many(model: TrainedModel, texts: Sequence[str], pipeline: TokenPipelineConfig) -> List[Prediction]:
    """Raw strings in, one Prediction per input, order preserved.

    A text whose token sequence comes out empty is scored as the all-PAD
    sequence and flagged.
    """
    docs = [run_pipeline(text, pipeline) for text in texts]
    if not docs:
        return []
    ids, lengths = encode_batch(docs, model.vocabulary, model.spec.max_len)
    probs = model.classifier.predict_proba(ids, lengths)
    labels = predict_labels(probs)
    return [
        Prediction(
            label=ClassLabel(int(label)),
            distribution=[float(p) for p in row],
            empty_after_preprocessing=not doc,
        )
        for doc, row, label in zip(docs, probs, labels)
    ]


def predict(model: TrainedModel, text: str, pipeline: TokenPipelineConfig) -> Prediction:
    return predict_many(model, [text], pipeline)[0]
