# app/infrastructure/autodiff/__init__.py

from .tensor import Tensor, Tape, backward, checked_mode, recording
from .optim import AdamOptimizer, clip_grad_norm
from .gradcheck import check_gradients
