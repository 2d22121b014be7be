# app/infrastructure/autodiff/gradcheck.py
"""Central finite-difference check of tape gradients."""
from typing import Callable, Dict, Sequence

import numpy as np

from app.infrastructure.autodiff.tensor import Tensor, backward, recording

DEFAULT_STEP = 1e-5
# Relative errors use this floor in the denominator so near-zero gradients
# are compared in absolute terms.
DENOMINATOR_FLOOR = 1e-4


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = DENOMINATOR_FLOOR) -> float:
    if analytic.size == 0:
        return 0.0
    denominator = np.maximum(np.abs(analytic) + np.abs(numeric), floor)
    return float(np.max(np.abs(analytic - numeric) / denominator))


def numerical_gradient(loss_fn: Callable[[], Tensor], tensor: Tensor, step: float = DEFAULT_STEP) -> np.ndarray:
    """d(loss)/d(tensor) by central differences; loss_fn must be deterministic."""
    grad = np.zeros_like(tensor.data)
    flat = tensor.data.reshape(-1)
    grad_flat = grad.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + step
        plus = loss_fn().item()
        flat[i] = original - step
        minus = loss_fn().item()
        flat[i] = original
        grad_flat[i] = (plus - minus) / (2 * step)
    return grad


def analytic_gradients(loss_fn: Callable[[], Tensor], tensors: Sequence[Tensor]) -> Dict[int, np.ndarray]:
    for tensor in tensors:
        tensor.requires_grad = True
        tensor.zero_grad()
    with recording() as tape:
        loss = loss_fn()
        backward(loss, tape)
    return {id(t): (t.grad if t.grad is not None else np.zeros_like(t.data)) for t in tensors}


def check_gradients(
    loss_fn: Callable[[], Tensor],
    tensors: Sequence[Tensor],
    step: float = DEFAULT_STEP,
) -> float:
    """Largest relative error between tape and finite-difference gradients over all tensors."""
    analytic = analytic_gradients(loss_fn, tensors)
    worst = 0.0
    for tensor in tensors:
        numeric = numerical_gradient(loss_fn, tensor, step)
        worst = max(worst, relative_error(analytic[id(tensor)], numeric))
    return worst
