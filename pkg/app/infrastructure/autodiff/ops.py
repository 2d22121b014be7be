# app/infrastructure/autodiff/ops.py
"""
Layer-level differentiable ops.

Every op takes and returns Tensors, computes its forward pass with numpy and
registers a closure that maps output gradients to input gradients. Leading
dimensions are treated as batch dimensions wherever an op is row-wise.
"""
from typing import Optional, Sequence, Tuple

import numpy as np

from app.domain.exceptions import IndexOutOfRangeException, ShapeMismatchException
from app.infrastructure.autodiff.tensor import Tensor, record_op

PROBABILITY_FLOOR = 1e-12


def _rows(array: np.ndarray) -> np.ndarray:
    return array.reshape(-1, array.shape[-1])


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # split on sign so exp never overflows
    out = np.empty_like(z)
    positive = z >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-z[positive]))
    exp_z = np.exp(z[~positive])
    out[~positive] = exp_z / (1.0 + exp_z)
    return out


def _require(condition: bool, message: str):
    if not condition:
        raise ShapeMismatchException(message)


def constant(data) -> Tensor:
    return Tensor(data, requires_grad=False)


# --- elementwise ---

def add(a: Tensor, b: Tensor) -> Tensor:
    _require(a.shape == b.shape, f"add: shapes {a.shape} and {b.shape} differ")
    out = Tensor(a.data + b.data)
    record_op("add", (a, b), (out,), lambda g: (g[0], g[0]))
    return out


def mul(a: Tensor, b: Tensor) -> Tensor:
    _require(a.shape == b.shape, f"mul: shapes {a.shape} and {b.shape} differ")
    out = Tensor(a.data * b.data)
    record_op("mul", (a, b), (out,), lambda g: (g[0] * b.data, g[0] * a.data))
    return out


def scale(x: Tensor, factor: float) -> Tensor:
    out = Tensor(x.data * factor)
    record_op("scale", (x,), (out,), lambda g: (g[0] * factor,))
    return out


def sum_all(x: Tensor) -> Tensor:
    out = Tensor(np.sum(x.data))
    record_op("sum", (x,), (out,), lambda g: (np.full_like(x.data, g[0]),))
    return out


def relu(x: Tensor) -> Tensor:
    active = x.data > 0
    out = Tensor(np.where(active, x.data, 0.0))
    record_op("relu", (x,), (out,), lambda g: (g[0] * active,))
    return out


def tanh(x: Tensor) -> Tensor:
    y = np.tanh(x.data)
    out = Tensor(y)
    record_op("tanh", (x,), (out,), lambda g: (g[0] * (1.0 - y * y),))
    return out


def apply_mask(x: Tensor, mask: np.ndarray, op_name: str = "mask") -> Tensor:
    """Multiply by a constant array (dropout masks with the survivor scaling folded in)."""
    _require(mask.shape == x.shape, f"{op_name}: mask shape {mask.shape} does not match {x.shape}")
    out = Tensor(x.data * mask)
    record_op(op_name, (x,), (out,), lambda g: (g[0] * mask,))
    return out


def dropout_mask(shape: Tuple[int, ...], rate: float, rng: np.random.Generator) -> np.ndarray:
    """Inverted-dropout mask: 0 with probability `rate`, 1/(1-rate) otherwise."""
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
    if rate == 0.0:
        return np.ones(shape)
    keep = rng.random(shape) >= rate
    return keep / (1.0 - rate)


def dropout(x: Tensor, rate: float, training: bool, rng: Optional[np.random.Generator] = None) -> Tensor:
    """Identity in eval mode or at rate 0; otherwise an independent mask per entry."""
    if not training or rate == 0.0:
        return x
    if rng is None:
        raise ValueError("dropout in training mode needs a random generator")
    return apply_mask(x, dropout_mask(x.shape, rate, rng), op_name="dropout")


def blend(mask: np.ndarray, new: Tensor, old: Tensor) -> Tensor:
    """Per-row select: rows with mask 1 take `new`, rows with mask 0 keep `old` (PAD freezing)."""
    _require(new.shape == old.shape, f"blend: shapes {new.shape} and {old.shape} differ")
    keep = mask.astype(np.float64).reshape(mask.shape + (1,) * (new.ndim - mask.ndim))
    out = Tensor(keep * new.data + (1.0 - keep) * old.data)
    record_op("blend", (new, old), (out,), lambda g: (g[0] * keep, g[0] * (1.0 - keep)))
    return out


# --- structural ---

def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    widths = [t.shape[axis] for t in tensors]
    out = Tensor(np.concatenate([t.data for t in tensors], axis=axis))

    def _backward(g):
        bounds = np.cumsum(widths)[:-1]
        return tuple(np.split(g[0], bounds, axis=axis))

    record_op("concat", tuple(tensors), (out,), _backward)
    return out


def stack(tensors: Sequence[Tensor], axis: int = 1) -> Tensor:
    out = Tensor(np.stack([t.data for t in tensors], axis=axis))

    def _backward(g):
        return tuple(np.take(g[0], i, axis=axis) for i in range(len(tensors)))

    record_op("stack", tuple(tensors), (out,), _backward)
    return out


def take(x: Tensor, index: int, axis: int = 1) -> Tensor:
    out = Tensor(np.take(x.data, index, axis=axis))

    def _backward(g):
        grad = np.zeros_like(x.data)
        slicer = [slice(None)] * x.ndim
        slicer[axis] = index
        grad[tuple(slicer)] = g[0]
        return (grad,)

    record_op("take", (x,), (out,), _backward)
    return out


def repeat_rows(vector: Tensor, n_rows: int) -> Tensor:
    """[d] -> [n_rows x d]; used for the learned decoder start token."""
    _require(vector.ndim == 1, f"repeat_rows expects a vector, got shape {vector.shape}")
    out = Tensor(np.tile(vector.data, (n_rows, 1)))
    record_op("repeat_rows", (vector,), (out,), lambda g: (g[0].sum(axis=0),))
    return out


# --- layers ---

def embedding(ids: np.ndarray, table: Tensor) -> Tensor:
    ids = np.asarray(ids, dtype=np.int64)
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise IndexOutOfRangeException(f"token index outside embedding table of {table.shape[0]} rows")
    out = Tensor(table.data[ids])

    def _backward(g):
        grad = np.zeros_like(table.data)
        np.add.at(grad, ids.reshape(-1), _rows(g[0]))
        return (grad,)

    record_op("embedding", (table,), (out,), _backward)
    return out


def dense(x: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    _require(
        x.shape[-1] == weight.shape[0] and bias.shape == (weight.shape[1],),
        f"dense: input {x.shape}, weight {weight.shape}, bias {bias.shape}",
    )
    out = Tensor(x.data @ weight.data + bias.data)

    def _backward(g):
        grad = g[0]
        return (
            grad @ weight.data.T,
            _rows(x.data).T @ _rows(grad),
            _rows(grad).sum(axis=0),
        )

    record_op("dense", (x, weight, bias), (out,), _backward)
    return out


def conv1d(x: Tensor, kernels: Tensor, bias: Tensor) -> Tensor:
    """
    Valid cross-correlation along the second-to-last axis.

    x: [..., n, d_in], kernels: [w, d_in, d_out] -> [..., n - w + 1, d_out]
    """
    width, d_in, d_out = kernels.shape
    n = x.shape[-2]
    _require(x.shape[-1] == d_in, f"conv1d: input channels {x.shape[-1]} != kernel channels {d_in}")
    _require(bias.shape == (d_out,), f"conv1d: bias shape {bias.shape} != ({d_out},)")
    _require(n >= width, f"conv1d: sequence length {n} shorter than kernel width {width}")
    n_out = n - width + 1

    out_data = np.broadcast_to(bias.data, x.shape[:-2] + (n_out, d_out)).copy()
    for k in range(width):
        out_data += x.data[..., k:k + n_out, :] @ kernels.data[k]
    out = Tensor(out_data)

    def _backward(g):
        grad = g[0]
        dx = np.zeros_like(x.data)
        dk = np.zeros_like(kernels.data)
        for k in range(width):
            dx[..., k:k + n_out, :] += grad @ kernels.data[k].T
            dk[k] = _rows(x.data[..., k:k + n_out, :]).T @ _rows(grad)
        return dx, dk, _rows(grad).sum(axis=0)

    record_op("conv1d", (x, kernels, bias), (out,), _backward)
    return out


def lstm_cell(
    x: Tensor, h_prev: Tensor, c_prev: Tensor, w: Tensor, u: Tensor, b: Tensor
) -> Tuple[Tensor, Tensor]:
    """
    One LSTM step, gate blocks ordered [input, forget, candidate, output].

    w: [d_in x 4H], u: [H x 4H], b: [4H]
    """
    hidden = h_prev.shape[-1]
    _require(
        w.shape == (x.shape[-1], 4 * hidden) and u.shape == (hidden, 4 * hidden) and b.shape == (4 * hidden,),
        f"lstm_cell: x {x.shape}, h {h_prev.shape}, w {w.shape}, u {u.shape}, b {b.shape}",
    )
    _require(c_prev.shape == h_prev.shape, f"lstm_cell: c {c_prev.shape} != h {h_prev.shape}")

    z = x.data @ w.data + h_prev.data @ u.data + b.data
    i = _sigmoid(z[..., :hidden])
    f = _sigmoid(z[..., hidden:2 * hidden])
    cand = np.tanh(z[..., 2 * hidden:3 * hidden])
    o = _sigmoid(z[..., 3 * hidden:])
    c_data = f * c_prev.data + i * cand
    tanh_c = np.tanh(c_data)
    h = Tensor(o * tanh_c)
    c = Tensor(c_data)

    def _backward(g):
        dh, dc_out = g
        dc = dc_out + dh * o * (1.0 - tanh_c * tanh_c)
        dz = np.concatenate(
            [
                dc * cand * i * (1.0 - i),
                dc * c_prev.data * f * (1.0 - f),
                dc * i * (1.0 - cand * cand),
                dh * tanh_c * o * (1.0 - o),
            ],
            axis=-1,
        )
        return (
            dz @ w.data.T,
            dz @ u.data.T,
            dc * f,
            _rows(x.data).T @ _rows(dz),
            _rows(h_prev.data).T @ _rows(dz),
            _rows(dz).sum(axis=0),
        )

    record_op("lstm_cell", (x, h_prev, c_prev, w, u, b), (h, c), _backward)
    return h, c


def gru_cell(x: Tensor, h_prev: Tensor, w: Tensor, u: Tensor, b: Tensor) -> Tensor:
    """
    One GRU step, gate blocks ordered [update, reset, candidate].

    The reset gate multiplies h_prev before the recurrent matmul of the candidate.
    """
    hidden = h_prev.shape[-1]
    _require(
        w.shape == (x.shape[-1], 3 * hidden) and u.shape == (hidden, 3 * hidden) and b.shape == (3 * hidden,),
        f"gru_cell: x {x.shape}, h {h_prev.shape}, w {w.shape}, u {u.shape}, b {b.shape}",
    )
    u_zr, u_n = u.data[:, :2 * hidden], u.data[:, 2 * hidden:]
    xw = x.data @ w.data + b.data
    a_zr = xw[..., :2 * hidden] + h_prev.data @ u_zr
    z = _sigmoid(a_zr[..., :hidden])
    r = _sigmoid(a_zr[..., hidden:])
    reset_h = r * h_prev.data
    cand = np.tanh(xw[..., 2 * hidden:] + reset_h @ u_n)
    h = Tensor((1.0 - z) * h_prev.data + z * cand)

    def _backward(g):
        dh = g[0]
        da_n = dh * z * (1.0 - cand * cand)
        d_reset_h = da_n @ u_n.T
        da_z = dh * (cand - h_prev.data) * z * (1.0 - z)
        da_r = d_reset_h * h_prev.data * r * (1.0 - r)
        da_zr = np.concatenate([da_z, da_r], axis=-1)
        da = np.concatenate([da_zr, da_n], axis=-1)
        dh_prev = dh * (1.0 - z) + d_reset_h * r + da_zr @ u_zr.T
        du = np.concatenate(
            [_rows(h_prev.data).T @ _rows(da_zr), _rows(reset_h).T @ _rows(da_n)],
            axis=-1,
        )
        return (
            da @ w.data.T,
            dh_prev,
            _rows(x.data).T @ _rows(da),
            du,
            _rows(da).sum(axis=0),
        )

    record_op("gru_cell", (x, h_prev, w, u, b), (h,), _backward)
    return h


def additive_attention(
    s_prev: Tensor,
    states: Tensor,
    w_a: Tensor,
    v_a: Tensor,
    mask: Optional[np.ndarray] = None,
) -> Tuple[Tensor, Tensor]:
    """
    score_i = v_a . tanh(W_a [s; h_i]), alpha = softmax(score), c = sum_i alpha_i h_i.

    s_prev: [d_s] or [B x d_s]; states: [n x d_h] or [B x n x d_h];
    w_a: [(d_s + d_h) x d_att]; v_a: [d_att]. Positions where mask is 0 get
    zero weight; every row needs at least one unmasked position.
    """
    single = s_prev.ndim == 1
    s = s_prev.data[None, :] if single else s_prev.data
    hs = states.data[None, :, :] if single else states.data
    batch, n, d_h = hs.shape
    d_s = s.shape[-1]
    _require(n >= 1, "additive_attention: needs at least one encoder state")
    _require(s.shape[0] == batch, f"additive_attention: batch {s.shape[0]} != {batch}")
    _require(
        w_a.shape[0] == d_s + d_h and v_a.shape == (w_a.shape[1],),
        f"additive_attention: s {s_prev.shape}, states {states.shape}, W_a {w_a.shape}, v_a {v_a.shape}",
    )
    valid = np.ones((batch, n), dtype=bool) if mask is None else np.asarray(mask, dtype=bool).reshape(batch, n)
    _require(bool(valid.any(axis=1).all()), "additive_attention: a row has no unmasked position")

    w_s, w_h = w_a.data[:d_s], w_a.data[d_s:]
    activation = np.tanh((s @ w_s)[:, None, :] + hs @ w_h)
    scores = activation @ v_a.data
    shifted = np.where(valid, scores, -np.inf)
    shifted = shifted - shifted.max(axis=1, keepdims=True)
    weights = np.where(valid, np.exp(shifted), 0.0)
    alpha = weights / weights.sum(axis=1, keepdims=True)
    context = np.einsum("bn,bnd->bd", alpha, hs)

    c_out = Tensor(context[0] if single else context)
    alpha_out = Tensor(alpha[0] if single else alpha)

    def _backward(g):
        dc, dalpha = g
        dc = dc[None, :] if single else dc
        dalpha = dalpha[None, :] if single else dalpha
        d_states = alpha[:, :, None] * dc[:, None, :]
        dalpha_total = dalpha + np.einsum("bnd,bd->bn", hs, dc)
        dscores = alpha * (dalpha_total - np.sum(alpha * dalpha_total, axis=1, keepdims=True))
        dv = np.einsum("bna,bn->a", activation, dscores)
        dpre = dscores[:, :, None] * v_a.data * (1.0 - activation * activation)
        d_states += dpre @ w_h.T
        dpre_s = dpre.sum(axis=1)
        dw = np.concatenate([s.T @ dpre_s, _rows(hs).T @ _rows(dpre)], axis=0)
        ds = dpre_s @ w_s.T
        if single:
            return ds[0], d_states[0], dw, dv
        return ds, d_states, dw, dv

    record_op("additive_attention", (s_prev, states, w_a, v_a), (c_out, alpha_out), _backward)
    return c_out, alpha_out


# --- output head ---

def softmax(z: Tensor) -> Tensor:
    """Along the last axis, shifted by the row maximum."""
    shifted = z.data - z.data.max(axis=-1, keepdims=True)
    exp_z = np.exp(shifted)
    probs = exp_z / exp_z.sum(axis=-1, keepdims=True)
    out = Tensor(probs)

    def _backward(g):
        grad = g[0]
        return (probs * (grad - np.sum(grad * probs, axis=-1, keepdims=True)),)

    record_op("softmax", (z,), (out,), _backward)
    return out


def cross_entropy(probs: Tensor, targets) -> Tensor:
    """Mean of -log(max(p[target], 1e-12)) over rows; a single vector is one row."""
    p = probs.data[None, :] if probs.ndim == 1 else probs.data
    targets = np.atleast_1d(np.asarray(targets, dtype=np.int64))
    n_rows, n_classes = p.shape
    _require(targets.shape == (n_rows,), f"cross_entropy: {targets.shape[0]} targets for {n_rows} rows")
    if targets.min() < 0 or targets.max() >= n_classes:
        raise IndexOutOfRangeException(f"target class outside [0, {n_classes})")

    picked = p[np.arange(n_rows), targets]
    floored = np.maximum(picked, PROBABILITY_FLOOR)
    out = Tensor(np.mean(-np.log(floored)))

    def _backward(g):
        grad = np.zeros_like(p)
        grad[np.arange(n_rows), targets] = np.where(picked > PROBABILITY_FLOOR, -1.0 / floored, 0.0) / n_rows
        grad *= g[0]
        return (grad[0] if probs.ndim == 1 else grad,)

    record_op("cross_entropy", (probs,), (out,), _backward)
    return out
