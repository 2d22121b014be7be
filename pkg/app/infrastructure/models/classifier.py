# app/infrastructure/models/classifier.py
"""
Embedding -> node dropout -> Conv1D + ReLU -> bidirectional LSTM encoder -> decoder head -> softmax.

Decoder heads:
  lstm       decoder LSTM over the encoder states, final (masked) state read out
  gru        decoder GRU over the encoder states, final (masked) state read out
  attention  s0 = tanh(dense(final encoder state)); c1 = attention(s0, H);
             s1 = GRU([y0; c1], s0); logits = dense(s1)
"""
from collections import OrderedDict
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.domain.entities.model_spec import ModelSpec
from app.domain.exceptions import InvalidSpecException, ShapeMismatchException
from app.infrastructure.autodiff import ops
from app.infrastructure.autodiff.tensor import Tensor
from app.infrastructure.models.recurrent import CellParams, bidirectional_encode, run_gru, run_lstm

LSTM_FORGET_BIAS = 1.0


def _glorot(rng: np.random.Generator, shape: Tuple[int, ...], fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def _lstm_bias(hidden: int) -> np.ndarray:
    bias = np.zeros(4 * hidden)
    bias[hidden:2 * hidden] = LSTM_FORGET_BIAS
    return bias


def _parameter_shapes(spec: ModelSpec) -> "OrderedDict[str, Tuple[int, ...]]":
    e, w, c, h, a = spec.embed_dim, spec.kernel_width, spec.conv_channels, spec.rnn_hidden, spec.attention_dim
    enc = spec.encoder_dim
    shapes: "OrderedDict[str, Tuple[int, ...]]" = OrderedDict()
    shapes["embedding"] = (spec.vocab_size, e)
    shapes["conv.kernel"] = (w, e, c)
    shapes["conv.bias"] = (c,)
    for direction in ("encoder.forward", "encoder.backward"):
        shapes[f"{direction}.w"] = (c, 4 * h)
        shapes[f"{direction}.u"] = (h, 4 * h)
        shapes[f"{direction}.b"] = (4 * h,)
    if spec.architecture == "lstm":
        shapes["decoder.w"] = (enc, 4 * h)
        shapes["decoder.u"] = (h, 4 * h)
        shapes["decoder.b"] = (4 * h,)
    elif spec.architecture == "gru":
        shapes["decoder.w"] = (enc, 3 * h)
        shapes["decoder.u"] = (h, 3 * h)
        shapes["decoder.b"] = (3 * h,)
    else:
        shapes["bridge.w"] = (enc, h)
        shapes["bridge.b"] = (h,)
        shapes["attention.w"] = (h + enc, a)
        shapes["attention.v"] = (a,)
        shapes["decoder.start"] = (e,)
        shapes["decoder.w"] = (e + enc, 3 * h)
        shapes["decoder.u"] = (h, 3 * h)
        shapes["decoder.b"] = (3 * h,)
    shapes["output.w"] = (h, spec.n_classes)
    shapes["output.b"] = (spec.n_classes,)
    return shapes


def _initial_value(name: str, shape: Tuple[int, ...], spec: ModelSpec, rng: np.random.Generator) -> np.ndarray:
    if name.endswith(".b") and name.startswith("encoder"):
        return _lstm_bias(spec.rnn_hidden)
    if name == "decoder.b" and spec.architecture == "lstm":
        return _lstm_bias(spec.rnn_hidden)
    if name.endswith(".b") or name.endswith(".bias"):
        return np.zeros(shape)
    if name == "conv.kernel":
        width, d_in, d_out = shape
        return _glorot(rng, shape, width * d_in, width * d_out)
    if len(shape) == 1:
        return _glorot(rng, shape, shape[0], 1)
    return _glorot(rng, shape, shape[0], shape[1])


def expected_parameter_count(spec: ModelSpec) -> int:
    """Closed-form parameter count from the layer dimensions."""
    e, w, c, h, a, v = (spec.embed_dim, spec.kernel_width, spec.conv_channels,
                        spec.rnn_hidden, spec.attention_dim, spec.vocab_size)
    k = spec.n_classes
    trunk = v * e + w * e * c + c + 2 * (c * 4 * h + h * 4 * h + 4 * h)
    readout = h * k + k
    if spec.architecture == "lstm":
        head = 2 * h * 4 * h + h * 4 * h + 4 * h
    elif spec.architecture == "gru":
        head = 2 * h * 3 * h + h * 3 * h + 3 * h
    else:
        head = (2 * h * h + h) + (3 * h * a + a) + e + ((e + 2 * h) * 3 * h + h * 3 * h + 3 * h)
    return trunk + head + readout


class EncoderDecoderClassifier:
    def __init__(self, spec: ModelSpec, params: Dict[str, Tensor]):
        expected = _parameter_shapes(spec)
        if list(params) != list(expected):
            raise InvalidSpecException(f"parameter set does not match the {spec.architecture} architecture")
        for name, shape in expected.items():
            if params[name].shape != shape:
                raise ShapeMismatchException(f"parameter {name} has shape {params[name].shape}, expected {shape}")
        self.spec = spec
        self.params = params

    # --- parameters ---

    def parameters(self) -> List[Tensor]:
        return list(self.params.values())

    def parameter_count(self) -> int:
        return sum(p.size for p in self.params.values())

    def state_dict(self) -> "OrderedDict[str, np.ndarray]":
        return OrderedDict((name, p.data.copy()) for name, p in self.params.items())

    def load_state_dict(self, state: Dict[str, np.ndarray]):
        for name, p in self.params.items():
            if state[name].shape != p.shape:
                raise ShapeMismatchException(f"state for {name} has shape {state[name].shape}, expected {p.shape}")
            p.data[...] = state[name]

    # --- forward ---

    def _masks(self, lengths: np.ndarray, n_out: int) -> np.ndarray:
        # conv window t covers tokens t..t+w-1; keep at least one position
        valid = np.maximum(lengths - self.spec.kernel_width + 1, 1)
        return np.arange(n_out)[None, :] < valid[:, None]

    def _cell(self, prefix: str) -> CellParams:
        return CellParams(self.params[f"{prefix}.w"], self.params[f"{prefix}.u"], self.params[f"{prefix}.b"])

    def _recurrent_mask(self, batch: int, training: bool, rng) -> Optional[np.ndarray]:
        if not training or self.spec.dropout_recurrent == 0.0:
            return None
        return ops.dropout_mask((batch, self.spec.rnn_hidden), self.spec.dropout_recurrent, rng)

    def encode(self, ids: np.ndarray, lengths: np.ndarray, training: bool = False,
               rng: Optional[np.random.Generator] = None) -> Tuple[Tensor, Tensor, np.ndarray]:
        """Returns (encoder states [B x m x 2H], final state [B x 2H], position mask [B x m])."""
        p = self.params
        ids = np.asarray(ids, dtype=np.int64)
        lengths = np.asarray(lengths, dtype=np.int64)
        if ids.ndim != 2 or lengths.shape != (ids.shape[0],):
            raise ShapeMismatchException(f"ids {ids.shape} and lengths {lengths.shape} are inconsistent")
        if ids.shape[1] < self.spec.kernel_width:
            raise ShapeMismatchException(
                f"sequence length {ids.shape[1]} is shorter than the kernel width {self.spec.kernel_width}"
            )

        x = ops.embedding(ids, p["embedding"])
        x = ops.dropout(x, self.spec.dropout_node, training, rng)
        x = ops.relu(ops.conv1d(x, p["conv.kernel"], p["conv.bias"]))
        mask = self._masks(lengths, x.shape[1])

        drops = (self._recurrent_mask(x.shape[0], training, rng), self._recurrent_mask(x.shape[0], training, rng))
        states, final = bidirectional_encode(
            x, self._cell("encoder.forward"), self._cell("encoder.backward"), mask, drops
        )
        return states, final, mask

    def forward(self, ids: np.ndarray, lengths: np.ndarray, training: bool = False,
                rng: Optional[np.random.Generator] = None) -> Tensor:
        """Class probabilities [B x 7]."""
        p = self.params
        states, final, mask = self.encode(ids, lengths, training, rng)

        if self.spec.architecture == "lstm":
            _, readout = run_lstm(states, self._cell("decoder"), mask,
                                  drop=self._recurrent_mask(states.shape[0], training, rng))
        elif self.spec.architecture == "gru":
            readout = run_gru(states, self._cell("decoder"), mask,
                              drop=self._recurrent_mask(states.shape[0], training, rng))
        else:
            s0 = ops.tanh(ops.dense(final, p["bridge.w"], p["bridge.b"]))
            context, _ = ops.additive_attention(s0, states, p["attention.w"], p["attention.v"], mask)
            start = ops.repeat_rows(p["decoder.start"], states.shape[0])
            readout = ops.gru_cell(ops.concat([start, context], axis=-1), s0,
                                   p["decoder.w"], p["decoder.u"], p["decoder.b"])

        readout = ops.dropout(readout, self.spec.dropout_node, training, rng)
        return ops.softmax(ops.dense(readout, p["output.w"], p["output.b"]))

    def predict_proba(self, ids: np.ndarray, lengths: np.ndarray, batch_size: int = 256) -> np.ndarray:
        """Eval-mode probabilities, computed in chunks."""
        ids = np.asarray(ids, dtype=np.int64)
        lengths = np.asarray(lengths, dtype=np.int64)
        chunks = [
            self.forward(ids[start:start + batch_size], lengths[start:start + batch_size]).data
            for start in range(0, len(ids), batch_size)
        ]
        if not chunks:
            return np.zeros((0, self.spec.n_classes))
        return np.concatenate(chunks, axis=0)


def build_model(spec: ModelSpec, seed: int) -> EncoderDecoderClassifier:
    """Fresh model with Glorot-uniform matrices, zero biases and LSTM forget bias 1."""
    if spec.max_len < spec.kernel_width:
        raise InvalidSpecException(f"max_len {spec.max_len} is shorter than the kernel width {spec.kernel_width}")
    rng = np.random.default_rng(seed)
    params = OrderedDict(
        (name, Tensor(_initial_value(name, shape, spec, rng), requires_grad=True, name=name))
        for name, shape in _parameter_shapes(spec).items()
    )
    return EncoderDecoderClassifier(spec, params)
