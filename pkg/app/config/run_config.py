# app/config/run_config.py
"""
Run configuration file: JSON with optional sections "model", "train",
"split" and "pipeline". CLI flags override file values, file values
override the defaults in training_defaults.
"""
import json
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from app.config.training_defaults import training_defaults
from app.domain.entities.corpus import SplitSpec
from app.domain.entities.model_spec import TrainConfig
from app.domain.exceptions import CorpusFileNotFoundException


class ModelOverrides(BaseModel):
    """Layer sizes and dropout; architecture, vocab_size and max_len are filled in per run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    embed_dim: Optional[int] = Field(default=None, ge=1)
    kernel_width: Optional[int] = Field(default=None, ge=1)
    conv_channels: Optional[int] = Field(default=None, ge=1)
    rnn_hidden: Optional[int] = Field(default=None, ge=1)
    attention_dim: Optional[int] = Field(default=None, ge=1)
    dropout_node: Optional[float] = Field(default=None, ge=0.0, lt=1.0)
    dropout_recurrent: Optional[float] = Field(default=None, ge=0.0, lt=1.0)
    max_len: Optional[int] = Field(default=None, ge=1)

    def as_kwargs(self) -> dict:
        return self.model_dump(exclude_none=True, exclude={"max_len"})


class PipelineOptions(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    min_token_count: int = Field(default=training_defaults.MIN_TOKEN_COUNT, ge=1)
    keep_unknown_emoji: bool = False
    max_terms: Optional[int] = Field(default=None, ge=1)


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    model: ModelOverrides = Field(default_factory=ModelOverrides)
    train: TrainConfig = Field(default_factory=TrainConfig)
    split: SplitSpec = Field(default_factory=SplitSpec)
    pipeline: PipelineOptions = Field(default_factory=PipelineOptions)

    @classmethod
    def from_file(cls, path: Optional[Path]) -> "RunConfig":
        if path is None:
            return cls()
        path = Path(path)
        if not path.is_file():
            raise CorpusFileNotFoundException(path)
        return cls(**json.loads(path.read_text(encoding="utf-8-sig")))

    def with_overrides(
        self,
        seed: Optional[int] = None,
        epochs: Optional[int] = None,
        batch_size: Optional[int] = None,
        patience: Optional[int] = None,
        max_len: Optional[int] = None,
    ) -> "RunConfig":
        """Apply CLI flags; a seed seeds both the split and the training run."""
        train_updates = {key: value for key, value in
                         (("seed", seed), ("max_epochs", epochs), ("batch_size", batch_size), ("patience", patience))
                         if value is not None}
        model_updates = {"max_len": max_len} if max_len is not None else {}
        split_updates = {"seed": seed} if seed is not None else {}
        return RunConfig(
            model=ModelOverrides(**{**self.model.model_dump(), **model_updates}),
            train=TrainConfig(**{**self.train.model_dump(), **train_updates}),
            split=SplitSpec(**{**self.split.model_dump(), **split_updates}),
            pipeline=self.pipeline,
        )

    def snapshot(self) -> dict:
        return self.model_dump(mode="json")
