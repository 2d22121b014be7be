# app/infrastructure/autodiff/tensor.py
"""
Dense f64 tensors and an explicit operation tape for reverse-mode gradients.

Ops append a node to the active tape only while `recording()` is open and at
least one input requires a gradient; outside a tape they are plain numpy
evaluations, which is what inference uses.
"""
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from app.config.settings import settings
from app.domain.exceptions import GraphNotRecordedException, NonFiniteValueException, ShapeMismatchException

BackwardFn = Callable[[Tuple[np.ndarray, ...]], Tuple[Optional[np.ndarray], ...]]


class Tensor:
    def __init__(self, data, requires_grad: bool = False, name: str = ""):
        self.data = np.array(data, dtype=np.float64)
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self.name = name

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeMismatchException(f"item() needs a single-element tensor, got shape {self.shape}")
        return float(self.data.reshape(()))

    def numpy(self) -> np.ndarray:
        return self.data.copy()

    def zero_grad(self):
        self.grad = None

    def accumulate_grad(self, grad: np.ndarray):
        if grad.shape != self.data.shape:
            raise ShapeMismatchException(f"gradient shape {grad.shape} does not match tensor shape {self.shape}")
        self.grad = grad.copy() if self.grad is None else self.grad + grad

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Tensor{label} shape={self.shape} requires_grad={self.requires_grad}>"


@dataclass
class Node:
    op_name: str
    inputs: Tuple[Tensor, ...]
    outputs: Tuple[Tensor, ...]
    backward_fn: BackwardFn


@dataclass
class Tape:
    """Operations in execution order; reversed, that order is a valid topological order."""

    nodes: List[Node] = field(default_factory=list)
    _produced: Dict[int, int] = field(default_factory=dict)

    def append(self, node: Node):
        for output in node.outputs:
            self._produced[id(output)] = len(self.nodes)
        self.nodes.append(node)

    def produced(self, tensor: Tensor) -> bool:
        return id(tensor) in self._produced

    def __len__(self) -> int:
        return len(self.nodes)


_active_tape: ContextVar[Optional[Tape]] = ContextVar("active_tape", default=None)
_checked: ContextVar[Optional[bool]] = ContextVar("checked_mode", default=None)


@contextmanager
def recording() -> Iterator[Tape]:
    """Record every differentiable op executed in this block on a fresh tape."""
    tape = Tape()
    token = _active_tape.set(tape)
    try:
        yield tape
    finally:
        _active_tape.reset(token)


def current_tape() -> Optional[Tape]:
    return _active_tape.get()


@contextmanager
def checked_mode(enabled: bool = True) -> Iterator[None]:
    token = _checked.set(enabled)
    try:
        yield
    finally:
        _checked.reset(token)


def is_checked() -> bool:
    value = _checked.get()
    return settings.CHECKED_MODE if value is None else value


def check_finite(op_name: str, *arrays: np.ndarray):
    if not is_checked():
        return
    for array in arrays:
        if not np.all(np.isfinite(array)):
            raise NonFiniteValueException(op_name)


def record_op(op_name: str, inputs: Sequence[Tensor], outputs: Sequence[Tensor], backward_fn: BackwardFn):
    """Finite-check the outputs and, under an active tape, register the node."""
    check_finite(op_name, *(output.data for output in outputs))
    tape = _active_tape.get()
    if tape is None or not any(tensor.requires_grad for tensor in inputs):
        return
    for output in outputs:
        output.requires_grad = True
    tape.append(Node(op_name, tuple(inputs), tuple(outputs), backward_fn))


def backward(loss: Tensor, tape: Optional[Tape] = None) -> Dict[int, np.ndarray]:
    """
    Propagate d(loss)/d(x) to every tensor that requires a gradient.

    Leaf tensors (parameters, inputs) get their `.grad` accumulated; the
    returned dict holds the gradient of every tensor on the path, keyed by id.
    """
    tape = tape if tape is not None else _active_tape.get()
    if tape is None or not tape.produced(loss):
        raise GraphNotRecordedException("backward() called on a value that was not recorded on a tape")
    if loss.size != 1:
        raise ShapeMismatchException(f"backward() needs a scalar loss, got shape {loss.shape}")

    grads: Dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
    leaves: Dict[int, Tensor] = {}
    for node in reversed(tape.nodes):
        output_grads = [grads.get(id(output)) for output in node.outputs]
        if all(grad is None for grad in output_grads):
            continue
        output_grads = tuple(
            np.zeros_like(output.data) if grad is None else grad for output, grad in zip(node.outputs, output_grads)
        )
        input_grads = node.backward_fn(output_grads)
        for tensor, grad in zip(node.inputs, input_grads):
            if grad is None or not tensor.requires_grad:
                continue
            if grad.shape != tensor.shape:
                raise ShapeMismatchException(
                    f"op '{node.op_name}' returned gradient of shape {grad.shape} for input of shape {tensor.shape}"
                )
            key = id(tensor)
            grads[key] = grad if key not in grads else grads[key] + grad
            if not tape.produced(tensor):
                leaves[key] = tensor

    for key, tensor in leaves.items():
        tensor.accumulate_grad(grads[key])
    return grads
