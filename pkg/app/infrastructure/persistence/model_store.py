# app/infrastructure/persistence/model_store.py
"""
Binary model file.

    magic "BHSC" | u16 format version | u32 spec length | spec JSON (UTF-8, sorted keys)
    | 64-byte vocabulary hash | 64-byte pipeline hash | u32 tensor count
    | per tensor: u16 name length, name, u8 rank, rank x u32 dims, little-endian f64 data
    | sha256 of everything above

All integers are little-endian.
"""
import hashlib
import json
import struct
import warnings
from collections import OrderedDict
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from app.config.logging_config import logger
from app.domain.entities.model_spec import ModelSpec
from app.domain.entities.vocabulary import Vocabulary
from app.domain.exceptions import (
    ChecksumMismatchException,
    CorpusFileNotFoundException,
    FormatVersionMismatchException,
    VocabHashMismatchException,
    VocabHashMismatchWarning,
)
from app.infrastructure.autodiff.tensor import Tensor
from app.infrastructure.models.classifier import EncoderDecoderClassifier
from app.infrastructure.models.trained_model import TrainedModel

MAGIC = b"BHSC"
FORMAT_VERSION = 1
HASH_HEX_LENGTH = 64
CHECKSUM_LENGTH = 32


class _Reader:
    def __init__(self, payload: bytes):
        self.payload = payload
        self.offset = 0

    def take(self, size: int) -> bytes:
        if self.offset + size > len(self.payload):
            raise ChecksumMismatchException("model file ends early")
        chunk = self.payload[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def _encode(model: TrainedModel) -> bytes:
    spec_json = json.dumps(model.spec.model_dump(), sort_keys=True, separators=(",", ":")).encode("utf-8")
    parts = [
        MAGIC,
        struct.pack("<H", FORMAT_VERSION),
        struct.pack("<I", len(spec_json)),
        spec_json,
        model.vocab_hash.encode("ascii"),
        model.pipeline_hash.encode("ascii"),
        struct.pack("<I", len(model.classifier.params)),
    ]
    for name, tensor in model.classifier.params.items():
        encoded_name = name.encode("utf-8")
        parts.append(struct.pack("<H", len(encoded_name)))
        parts.append(encoded_name)
        parts.append(struct.pack("<B", tensor.ndim))
        parts.append(struct.pack(f"<{tensor.ndim}I", *tensor.shape))
        parts.append(np.ascontiguousarray(tensor.data, dtype="<f8").tobytes())
    body = b"".join(parts)
    return body + hashlib.sha256(body).digest()


def save_model(model: TrainedModel, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(_encode(model))
    logger.info(f"[MODEL-STORE] Saved {model.spec.architecture} model ({model.classifier.parameter_count()} "
                f"parameters) to {path}")
    return path


def _decode(payload: bytes) -> Tuple[ModelSpec, str, str, "OrderedDict[str, Tensor]"]:
    if len(payload) < CHECKSUM_LENGTH or hashlib.sha256(payload[:-CHECKSUM_LENGTH]).digest() != payload[-CHECKSUM_LENGTH:]:
        raise ChecksumMismatchException("model file checksum does not match its contents (truncated or modified)")
    reader = _Reader(payload[:-CHECKSUM_LENGTH])
    if reader.take(len(MAGIC)) != MAGIC:
        raise FormatVersionMismatchException("not a model file (bad magic bytes)")
    (version,) = reader.unpack("<H")
    if version != FORMAT_VERSION:
        raise FormatVersionMismatchException(f"model format version {version}, expected {FORMAT_VERSION}")
    (spec_length,) = reader.unpack("<I")
    spec = ModelSpec(**json.loads(reader.take(spec_length).decode("utf-8")))
    vocab_hash = reader.take(HASH_HEX_LENGTH).decode("ascii")
    pipeline_hash = reader.take(HASH_HEX_LENGTH).decode("ascii")
    (count,) = reader.unpack("<I")
    params: "OrderedDict[str, Tensor]" = OrderedDict()
    for _ in range(count):
        (name_length,) = reader.unpack("<H")
        name = reader.take(name_length).decode("utf-8")
        (rank,) = reader.unpack("<B")
        shape = reader.unpack(f"<{rank}I")
        size = int(np.prod(shape)) if rank else 1
        data = np.frombuffer(reader.take(8 * size), dtype="<f8").reshape(shape)
        params[name] = Tensor(data, requires_grad=True, name=name)
    return spec, vocab_hash, pipeline_hash, params


def read_header(path: Path) -> Tuple[ModelSpec, str, str]:
    """(spec, vocabulary hash, pipeline hash) of a model file."""
    path = Path(path)
    if not path.is_file():
        raise CorpusFileNotFoundException(path)
    spec, vocab_hash, pipeline_hash, _ = _decode(path.read_bytes())
    return spec, vocab_hash, pipeline_hash


def load_model(
    path: Path,
    vocabulary: Vocabulary,
    pipeline_hash: Optional[str] = None,
    strict: bool = False,
) -> TrainedModel:
    """
    Rebuild a TrainedModel. A vocabulary (or pipeline hash) other than the one
    the model was saved with warns with VocabHashMismatchWarning, or raises
    VocabHashMismatchException when strict.
    """
    path = Path(path)
    if not path.is_file():
        raise CorpusFileNotFoundException(path)
    spec, stored_vocab_hash, stored_pipeline_hash, params = _decode(path.read_bytes())

    mismatches = []
    if vocabulary.content_hash() != stored_vocab_hash:
        mismatches.append("vocabulary")
    if pipeline_hash is not None and pipeline_hash != stored_pipeline_hash:
        mismatches.append("pipeline config")
    if mismatches:
        message = f"{' and '.join(mismatches)} differ from the ones {path.name} was trained with"
        if strict:
            raise VocabHashMismatchException(message)
        warnings.warn(message, VocabHashMismatchWarning, stacklevel=2)
        logger.warning(f"[MODEL-STORE] {message}")

    return TrainedModel(
        classifier=EncoderDecoderClassifier(spec, params),
        vocabulary=vocabulary,
        pipeline_hash=stored_pipeline_hash,
    )
