# app/infrastructure/models/__init__.py

from .classifier import EncoderDecoderClassifier, build_model, expected_parameter_count
from .dataset import EncodedDataset
from .evaluator import evaluate
from .predictor import Prediction, predict, predict_many
from .trained_model import TrainedModel
from .trainer import Trainer, train
