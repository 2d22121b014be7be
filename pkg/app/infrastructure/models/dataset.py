# app/infrastructure/models/dataset.py
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from app.domain.exceptions import ShapeMismatchException


@dataclass(frozen=True)
class EncodedDataset:
    """Padded id matrix, true lengths and class indices for one corpus split."""

    ids: np.ndarray
    lengths: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if self.ids.ndim != 2:
            raise ShapeMismatchException(f"ids must be [n x max_len], got shape {self.ids.shape}")
        n = self.ids.shape[0]
        if self.lengths.shape != (n,) or self.labels.shape != (n,):
            raise ShapeMismatchException(
                f"ids {self.ids.shape}, lengths {self.lengths.shape} and labels {self.labels.shape} disagree"
            )

    @classmethod
    def from_arrays(cls, ids, lengths, labels) -> "EncodedDataset":
        return cls(
            np.asarray(ids, dtype=np.int64),
            np.asarray(lengths, dtype=np.int64),
            np.asarray(labels, dtype=np.int64),
        )

    def __len__(self) -> int:
        return self.ids.shape[0]

    def subset(self, indices: Sequence[int]) -> "EncodedDataset":
        indices = np.asarray(indices, dtype=np.int64)
        return EncodedDataset(self.ids[indices], self.lengths[indices], self.labels[indices])
