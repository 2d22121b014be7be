# app/infrastructure/models/recurrent.py
"""Masked recurrences over [B x n x d] inputs built from the single-step cells."""
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from app.infrastructure.autodiff import ops
from app.infrastructure.autodiff.tensor import Tensor


class CellParams(NamedTuple):
    w: Tensor
    u: Tensor
    b: Tensor

    @property
    def hidden(self) -> int:
        return self.u.shape[0]


def _full_mask(inputs: Tensor) -> np.ndarray:
    return np.ones(inputs.shape[:2], dtype=bool)


def _dropped(h: Tensor, drop: Optional[np.ndarray]) -> Tensor:
    # recurrent dropout: one mask per sequence, reused at every step
    return h if drop is None else ops.apply_mask(h, drop, op_name="recurrent_dropout")


def run_lstm(
    inputs: Tensor,
    params: CellParams,
    mask: Optional[np.ndarray] = None,
    reverse: bool = False,
    drop: Optional[np.ndarray] = None,
) -> Tuple[List[Tensor], Tensor]:
    """Per-position states and the final state; states freeze on masked positions."""
    batch, steps = inputs.shape[0], inputs.shape[1]
    mask = _full_mask(inputs) if mask is None else mask
    h = ops.constant(np.zeros((batch, params.hidden)))
    c = ops.constant(np.zeros((batch, params.hidden)))
    states: List[Optional[Tensor]] = [None] * steps
    for t in (range(steps - 1, -1, -1) if reverse else range(steps)):
        h_new, c_new = ops.lstm_cell(ops.take(inputs, t), _dropped(h, drop), c, *params)
        h = ops.blend(mask[:, t], h_new, h)
        c = ops.blend(mask[:, t], c_new, c)
        states[t] = h
    return states, h


def run_gru(
    inputs: Tensor,
    params: CellParams,
    mask: Optional[np.ndarray] = None,
    drop: Optional[np.ndarray] = None,
) -> Tensor:
    batch, steps = inputs.shape[0], inputs.shape[1]
    mask = _full_mask(inputs) if mask is None else mask
    h = ops.constant(np.zeros((batch, params.hidden)))
    for t in range(steps):
        h_new = ops.gru_cell(ops.take(inputs, t), _dropped(h, drop), *params)
        h = ops.blend(mask[:, t], h_new, h)
    return h


def bidirectional_encode(
    inputs: Tensor,
    forward: CellParams,
    backward: CellParams,
    mask: Optional[np.ndarray] = None,
    drops: Tuple[Optional[np.ndarray], Optional[np.ndarray]] = (None, None),
) -> Tuple[Tensor, Tensor]:
    """
    Left-to-right and right-to-left LSTM passes concatenated per position.

    Returns (states [B x n x 2H], final [B x 2H]); the backward pass starts at
    the last unmasked position and its final state is the one at position 0.
    """
    forward_states, forward_final = run_lstm(inputs, forward, mask, reverse=False, drop=drops[0])
    backward_states, backward_final = run_lstm(inputs, backward, mask, reverse=True, drop=drops[1])
    states = ops.concat([ops.stack(forward_states, axis=1), ops.stack(backward_states, axis=1)], axis=-1)
    return states, ops.concat([forward_final, backward_final], axis=-1)
