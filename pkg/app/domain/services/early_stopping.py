# app/domain/services/early_stopping.py
"""Early stopping on validation loss."""
import math
from typing import Any, Optional


class EarlyStopping:
    """Stop when validation loss has not improved for `patience` consecutive epochs.

    Keeps the state captured at the best epoch so the trainer can restore it.
    """

    def __init__(self, patience: int = 5, min_delta: float = 0.0):
        if patience < 1:
            raise ValueError(f"patience must be >= 1, got {patience}")
        self.patience = patience
        self.min_delta = min_delta
        self.counter = 0
        self.best_loss = math.inf
        self.best_epoch = 0
        self.best_state: Optional[Any] = None
        self.should_stop = False

    def __call__(self, epoch: int, val_loss: float, state: Any = None) -> bool:
        """Record one epoch (1-based). Returns True once training should stop."""
        if val_loss < self.best_loss - self.min_delta:
            self.best_loss = val_loss
            self.best_epoch = epoch
            self.best_state = state
            self.counter = 0
        else:
            self.counter += 1
            if self.counter >= self.patience:
                self.should_stop = True
        return self.should_stop

    def reset(self):
        self.counter = 0
        self.best_loss = math.inf
        self.best_epoch = 0
        self.best_state = None
        self.should_stop = False
