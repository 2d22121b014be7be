# app/domain/exceptions.py
from typing import Optional


class DomainException(Exception):
    """Base exception for all domain-related errors."""
    pass


# --- corpus ---

class CorpusFileNotFoundException(DomainException, FileNotFoundError):
    """Raised when a corpus or resource file does not exist."""

    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"File not found: {self.path}")


class MalformedRowException(DomainException):
    """Raised when a CSV row has the wrong number of columns or an empty text."""

    def __init__(self, line_no: int, detail: str = "wrong column count"):
        self.line_no = line_no
        super().__init__(f"Malformed row at line {line_no}: {detail}")


class UnknownLabelException(DomainException):
    """Raised when a label string is not one of the seven canonical classes."""

    def __init__(self, value: str, line_no: Optional[int] = None):
        self.value = value
        self.line_no = line_no
        where = f" at line {line_no}" if line_no is not None else ""
        super().__init__(f"Unknown label {value!r}{where}")


class TooFewSamplesException(DomainException):
    """Raised when a split cannot put samples on both sides."""
    pass


class EmptyCorpusException(DomainException):
    """Raised when an operation needs at least one document."""
    pass


# --- numerical core ---

class ShapeMismatchException(DomainException):
    """Raised when tensor shapes are inconsistent for an op."""
    pass


class NonFiniteValueException(DomainException):
    """Raised in checked mode when an op produces NaN or Inf."""

    def __init__(self, op_name: str):
        self.op_name = op_name
        super().__init__(f"Non-finite value produced by op '{op_name}'")


class GraphNotRecordedException(DomainException):
    """Raised when backward is called on a value that was not recorded on a tape."""
    pass


class IndexOutOfRangeException(DomainException, IndexError):
    """Raised when a class index falls outside the probability vector."""
    pass


# --- models ---

class InvalidSpecException(DomainException):
    """Raised when a model specification is inconsistent."""
    pass


class DivergedLossException(DomainException):
    """Raised when the training loss becomes NaN or Inf."""

    def __init__(self, epoch: int, detail: str = ""):
        self.epoch = epoch
        suffix = f": {detail}" if detail else ""
        super().__init__(f"Loss diverged at epoch {epoch}{suffix}")


class FormatVersionMismatchException(DomainException):
    """Raised when a persisted artifact was written by an incompatible format version."""
    pass


class ChecksumMismatchException(DomainException):
    """Raised when a model file fails its integrity check (truncated or tampered)."""
    pass


class VocabHashMismatchException(DomainException):
    """Raised in strict mode when a model is paired with a different vocabulary or pipeline."""
    pass


class VocabHashMismatchWarning(UserWarning):
    """Warned when a model is loaded next to a vocabulary it was not trained with."""
    pass
