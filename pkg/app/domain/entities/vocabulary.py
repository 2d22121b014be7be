# app/domain/entities/vocabulary.py
import hashlib
from typing import Dict, List

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

PAD_INDEX = 0
UNK_INDEX = 1
RESERVED = 2

TfIdfVector = Dict[int, float]


class Vocabulary(BaseModel):
    """Term <-> index map with document frequencies. PAD=0 and UNK=1 are reserved."""

    model_config = ConfigDict(frozen=True)

    term_to_index: Dict[str, int]
    document_frequency: Dict[str, int]
    corpus_size: int = Field(ge=1)
    _index_to_term: Dict[int, str] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _consistent(self) -> "Vocabulary":
        indices = sorted(self.term_to_index.values())
        if indices != list(range(RESERVED, RESERVED + len(indices))):
            raise ValueError("vocabulary indices must be dense and start after the reserved slots")
        if set(self.term_to_index) != set(self.document_frequency):
            raise ValueError("every term needs a document frequency")
        for term, count in self.document_frequency.items():
            if not 1 <= count <= self.corpus_size:
                raise ValueError(f"document frequency of {term!r} is {count}, outside [1, {self.corpus_size}]")
        return self

    def model_post_init(self, __context) -> None:
        self._index_to_term = {index: term for term, index in self.term_to_index.items()}

    def __len__(self) -> int:
        """Embedding rows needed: terms plus the reserved slots."""
        return RESERVED + len(self.term_to_index)

    def index(self, term: str) -> int:
        return self.term_to_index.get(term, UNK_INDEX)

    def term(self, index: int) -> str | None:
        return self._index_to_term.get(index)

    @property
    def terms(self) -> List[str]:
        return [self._index_to_term[i] for i in range(RESERVED, len(self))]

    def to_tsv(self, format_version: int = 1) -> str:
        lines = [f"# format_version={format_version}\tN={self.corpus_size}", "term\tindex\tdocument_frequency"]
        for term in self.terms:
            lines.append(f"{term}\t{self.term_to_index[term]}\t{self.document_frequency[term]}")
        return "\n".join(lines) + "\n"

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_tsv().encode("utf-8")).hexdigest()


class EncodedSequence(BaseModel):
    model_config = ConfigDict(frozen=True)

    ids: List[int]
    true_length: int = Field(ge=0)
