# app/domain/entities/corpus.py
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.config.training_defaults import training_defaults
from app.domain.entities.labels import ClassLabel


class Sample(BaseModel):
    model_config = ConfigDict(frozen=True)

    text: str
    label: ClassLabel

    @field_validator("text")
    @classmethod
    def _text_not_blank(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("sample text is empty after trimming")
        return value


class LabeledCorpus(BaseModel):
    """Ordered (text, label) pairs; immutable after construction."""

    model_config = ConfigDict(frozen=True)

    samples: Tuple[Sample, ...] = ()
    source: str = "inline"

    @classmethod
    def from_pairs(cls, pairs, source: str = "inline") -> "LabeledCorpus":
        return cls(
            samples=tuple(Sample(text=text, label=ClassLabel(label)) for text, label in pairs),
            source=source,
        )

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def texts(self) -> List[str]:
        return [sample.text for sample in self.samples]

    @property
    def labels(self) -> List[int]:
        return [int(sample.label) for sample in self.samples]

    def class_counts(self) -> Dict[ClassLabel, int]:
        counts = {label: 0 for label in ClassLabel}
        for sample in self.samples:
            counts[sample.label] += 1
        return counts

    def subset(self, indices, source: str | None = None) -> "LabeledCorpus":
        return LabeledCorpus(
            samples=tuple(self.samples[i] for i in indices),
            source=source or self.source,
        )


class SplitSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    train_fraction: float = Field(default=training_defaults.TRAIN_FRACTION, gt=0.0, lt=1.0)
    seed: int = training_defaults.SEED
    stratified: bool = True


class CorpusSchema(BaseModel):
    """Column names of a labelled CSV; extra columns are ignored on load."""

    model_config = ConfigDict(frozen=True)

    text_column: str = "text"
    label_column: str = "label"
