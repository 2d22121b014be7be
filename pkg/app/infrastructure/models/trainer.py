# app/infrastructure/models/trainer.py
"""
Minibatch training with validation-loss early stopping.

One seed drives everything: the validation carve-out, batch order and dropout
masks each get their own stream from a SeedSequence, so two runs with the same
inputs produce identical histories.
"""
import time
from typing import Optional, Tuple

import numpy as np
import psutil

from app.config.logging_config import logger
from app.domain.entities.corpus import SplitSpec
from app.domain.entities.model_spec import EpochRecord, TrainConfig, TrainingHistory
from app.domain.exceptions import (
    DivergedLossException,
    EmptyCorpusException,
    NonFiniteValueException,
    TooFewSamplesException,
)
from app.domain.services.corpus_splitter import split_indices
from app.domain.services.early_stopping import EarlyStopping
from app.infrastructure.autodiff import ops
from app.infrastructure.autodiff.optim import AdamOptimizer, clip_grad_norm
from app.infrastructure.autodiff.tensor import Tensor, backward, recording
from app.infrastructure.models.classifier import EncoderDecoderClassifier
from app.infrastructure.models.dataset import EncodedDataset


def _resident_mb() -> float:
    return psutil.Process().memory_info().rss / (1024 * 1024)


def split_validation(data: EncodedDataset, fraction: float, seed: int) -> Tuple[EncodedDataset, EncodedDataset]:
    """Carve a validation set from the training data, stratified when every class allows it."""
    spec = SplitSpec(train_fraction=1.0 - fraction, seed=seed, stratified=True)
    labels = data.labels.tolist()
    try:
        train_idx, val_idx = split_indices(labels, spec)
    except TooFewSamplesException as e:
        logger.warning(f"[TRAINER] Stratified validation split not possible ({e}); falling back to a random split")
        train_idx, val_idx = split_indices(labels, spec.model_copy(update={"stratified": False}))
    return data.subset(train_idx), data.subset(val_idx)


def loss_and_accuracy(model: EncoderDecoderClassifier, data: EncodedDataset) -> Tuple[float, float]:
    """Eval-mode mean cross-entropy and accuracy."""
    probs = model.predict_proba(data.ids, data.lengths)
    loss = ops.cross_entropy(Tensor(probs), data.labels).item()
    accuracy = float(np.mean(probs.argmax(axis=1) == data.labels))
    return loss, accuracy


class Trainer:
    def __init__(self, config: TrainConfig):
        self.config = config

    def _train_epoch(self, model, optimizer, data: EncodedDataset, epoch: int,
                     shuffle_rng: np.random.Generator, dropout_rng: np.random.Generator):
        order = shuffle_rng.permutation(len(data))
        for start in range(0, len(order), self.config.batch_size):
            batch = data.subset(order[start:start + self.config.batch_size])
            try:
                with recording() as tape:
                    probs = model.forward(batch.ids, batch.lengths, training=True, rng=dropout_rng)
                    loss = ops.cross_entropy(probs, batch.labels)
                    backward(loss, tape)
            except NonFiniteValueException as e:
                raise DivergedLossException(epoch, f"non-finite value in {e.op_name}") from e
            if not np.isfinite(loss.item()):
                raise DivergedLossException(epoch, f"loss is {loss.item()}")
            clip_grad_norm(optimizer.params, self.config.clip_norm)
            optimizer.step()
            optimizer.zero_grad()

    def fit(
        self,
        model: EncoderDecoderClassifier,
        data: EncodedDataset,
        validation: Optional[EncodedDataset] = None,
    ) -> TrainingHistory:
        """Train in place; on return the model holds the best-validation-epoch weights."""
        if len(data) == 0:
            raise EmptyCorpusException("no training samples")
        missing = sorted(set(range(model.spec.n_classes)) - set(data.labels.tolist()))
        if missing:
            logger.warning(f"[TRAINER] Classes without training samples: {missing}")

        config = self.config
        if validation is None:
            data, validation = split_validation(data, config.validation_fraction, config.seed)
        shuffle_seed, dropout_seed = np.random.SeedSequence(config.seed).spawn(2)
        shuffle_rng = np.random.default_rng(shuffle_seed)
        dropout_rng = np.random.default_rng(dropout_seed)

        optimizer = AdamOptimizer(model.parameters(), lr=config.learning_rate,
                                  beta1=config.beta1, beta2=config.beta2, eps=config.epsilon)
        stopper = EarlyStopping(patience=config.patience, min_delta=config.min_delta)
        history = TrainingHistory()
        peak_mb = _resident_mb()
        started = time.perf_counter()
        arch = model.spec.architecture
        logger.info(f"[TRAINER] Training {arch} on {len(data)} samples, validating on {len(validation)}")

        for epoch in range(1, config.max_epochs + 1):
            self._train_epoch(model, optimizer, data, epoch, shuffle_rng, dropout_rng)
            try:
                train_loss, train_acc = loss_and_accuracy(model, data)
                val_loss, val_acc = loss_and_accuracy(model, validation)
            except NonFiniteValueException as e:
                raise DivergedLossException(epoch, f"non-finite value in {e.op_name}") from e
            if not (np.isfinite(train_loss) and np.isfinite(val_loss)):
                raise DivergedLossException(epoch, "non-finite evaluation loss")

            history.epochs.append(EpochRecord(epoch=epoch, train_loss=train_loss, train_acc=train_acc,
                                              val_loss=val_loss, val_acc=val_acc))
            peak_mb = max(peak_mb, _resident_mb())
            logger.debug(f"[TRAINER] {arch} epoch {epoch}: loss={train_loss:.4f} acc={train_acc:.3f} "
                         f"val_loss={val_loss:.4f} val_acc={val_acc:.3f}")

            if stopper(epoch, val_loss, model.state_dict()):
                history.stopped_early = True
                logger.info(f"[TRAINER] Early stop at epoch {epoch}; best epoch {stopper.best_epoch}")
                break

        if stopper.best_state is not None:
            model.load_state_dict(stopper.best_state)
        history.best_epoch = stopper.best_epoch
        history.train_seconds = time.perf_counter() - started
        history.peak_memory_mb = peak_mb
        logger.info(f"[TRAINER] {arch} finished after {history.epochs_run} epochs "
                    f"({history.train_seconds:.1f}s, peak {peak_mb:.0f} MB)")
        return history


def train(
    model: EncoderDecoderClassifier,
    data: EncodedDataset,
    config: TrainConfig,
    validation: Optional[EncodedDataset] = None,
) -> Tuple[EncoderDecoderClassifier, TrainingHistory]:
    history = Trainer(config).fit(model, data, validation)
    return model, history
