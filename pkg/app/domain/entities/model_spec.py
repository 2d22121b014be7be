# app/domain/entities/model_spec.py
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.config.training_defaults import training_defaults

Architecture = Literal["lstm", "gru", "attention"]
ARCHITECTURES = ("lstm", "gru", "attention")


class ModelSpec(BaseModel):
    """Architecture choice and layer sizes for one encoder-decoder classifier."""

    model_config = ConfigDict(frozen=True)

    architecture: Architecture = "attention"
    embed_dim: int = Field(default=training_defaults.EMBED_DIM, ge=1)
    kernel_width: int = Field(default=training_defaults.CONV_KERNEL_WIDTH, ge=1)
    conv_channels: int = Field(default=training_defaults.CONV_OUT_CHANNELS, ge=1)
    rnn_hidden: int = Field(default=training_defaults.RNN_HIDDEN, ge=1)
    attention_dim: int = Field(default=training_defaults.ATTENTION_DIM, ge=1)
    dropout_node: float = Field(default=training_defaults.DROPOUT_NODE, ge=0.0, lt=1.0)
    dropout_recurrent: float = Field(default=training_defaults.DROPOUT_RECURRENT, ge=0.0, lt=1.0)
    max_len: int = Field(default=training_defaults.MAX_LEN_CAP, ge=1)
    vocab_size: int = Field(default=2, ge=2)
    n_classes: int = training_defaults.N_CLASSES

    @field_validator("n_classes")
    @classmethod
    def _seven_classes(cls, value: int) -> int:
        if value != training_defaults.N_CLASSES:
            raise ValueError(f"n_classes must be {training_defaults.N_CLASSES}, got {value}")
        return value

    @property
    def encoder_dim(self) -> int:
        """Width of the concatenated bidirectional encoder state."""
        return 2 * self.rnn_hidden


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    learning_rate: float = Field(default=training_defaults.LEARNING_RATE, gt=0.0)
    beta1: float = Field(default=training_defaults.BETA1, ge=0.0, lt=1.0)
    beta2: float = Field(default=training_defaults.BETA2, ge=0.0, lt=1.0)
    epsilon: float = Field(default=training_defaults.EPSILON, gt=0.0)
    clip_norm: float = Field(default=training_defaults.CLIP_NORM, ge=0.0)
    batch_size: int = Field(default=training_defaults.BATCH_SIZE, ge=1)
    max_epochs: int = Field(default=training_defaults.MAX_EPOCHS, ge=1)
    patience: int = Field(default=training_defaults.PATIENCE, ge=1)
    min_delta: float = Field(default=training_defaults.MIN_DELTA, ge=0.0)
    validation_fraction: float = Field(default=training_defaults.VALIDATION_FRACTION, gt=0.0, lt=1.0)
    seed: int = training_defaults.SEED


class EpochRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    epoch: int
    train_loss: float
    train_acc: float
    val_loss: float
    val_acc: float


class TrainingHistory(BaseModel):
    epochs: List[EpochRecord] = Field(default_factory=list)
    best_epoch: int = 0
    stopped_early: bool = False
    train_seconds: float = 0.0
    peak_memory_mb: float = 0.0

    @property
    def epochs_run(self) -> int:
        return len(self.epochs)


class ClassMetrics(BaseModel):
    label: str
    precision: float
    recall: float
    f1: float
    support: int


class AveragedMetrics(BaseModel):
    precision: float
    recall: float
    f1: float


class BinaryReport(BaseModel):
    """Hateful vs. non-hateful view collapsed from the 7x7 confusion matrix."""

    accuracy: float
    precision: float
    recall: float
    f1: float
    confusion: List[List[int]]


class EvalReport(BaseModel):
    architecture: str = ""
    accuracy: float
    per_class: List[ClassMetrics]
    macro: AveragedMetrics
    weighted: AveragedMetrics
    confusion: List[List[int]]
    zero_support_classes: List[str] = Field(default_factory=list)
    binary: Optional[BinaryReport] = None
    train_seconds: float = 0.0
    peak_memory_mb: float = 0.0
    baseline_accuracy: Optional[float] = None
    empty_after_preprocessing: int = 0

    @model_validator(mode="after")
    def _confusion_consistent(self) -> "EvalReport":
        for row, metrics in zip(self.confusion, self.per_class):
            if sum(row) != metrics.support:
                raise ValueError(f"confusion row for {metrics.label} does not sum to its support")
        return self

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.confusion)


class RunManifest(BaseModel):
    command: str
    config: Dict = Field(default_factory=dict)
    seed: Optional[int] = None
    input_hashes: Dict[str, str] = Field(default_factory=dict)
    output_paths: List[str] = Field(default_factory=list)
    tool_version: str
    started_at: str
    finished_at: str
