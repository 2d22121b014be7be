# app/infrastructure/models/evaluator.py
import numpy as np

from app.domain.entities.model_spec import EvalReport
from app.domain.exceptions import EmptyCorpusException
from app.domain.services.metrics import compute_report
from app.infrastructure.models.classifier import EncoderDecoderClassifier
from app.infrastructure.models.dataset import EncodedDataset


def predict_labels(probs: np.ndarray) -> np.ndarray:
    """Row-wise argmax; np.argmax already returns the lowest index on ties."""
    return np.asarray(probs).argmax(axis=-1)


def evaluate(model: EncoderDecoderClassifier, data: EncodedDataset) -> EvalReport:
    if len(data) == 0:
        raise EmptyCorpusException("cannot evaluate on an empty test set")
    predicted = predict_labels(model.predict_proba(data.ids, data.lengths))
    return compute_report(data.labels.tolist(), predicted.tolist(), architecture=model.spec.architecture)
