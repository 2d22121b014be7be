# app/domain/services/vectorizer.py
import math
from collections import Counter
from typing import List, Optional, Sequence

import numpy as np

from app.config.training_defaults import training_defaults
from app.domain.entities.pipeline import TokenSequence
from app.domain.entities.vocabulary import (
    PAD_INDEX, RESERVED, UNK_INDEX, EncodedSequence, TfIdfVector, Vocabulary,
)
from app.domain.exceptions import EmptyCorpusException


def fit_vocabulary(docs: Sequence[TokenSequence], max_terms: Optional[int] = None) -> Vocabulary:
    """Index terms by descending corpus frequency (ties: lexicographic)."""
    if not docs:
        raise EmptyCorpusException("cannot fit a vocabulary on zero documents")
    frequency = Counter(token for doc in docs for token in doc)
    document_frequency = Counter(token for doc in docs for token in set(doc))
    ranked = sorted(frequency, key=lambda term: (-frequency[term], term))
    if max_terms is not None:
        ranked = ranked[:max_terms]
    return Vocabulary(
        term_to_index={term: RESERVED + i for i, term in enumerate(ranked)},
        document_frequency={term: document_frequency[term] for term in ranked},
        corpus_size=len(docs),
    )


def idf(vocab: Vocabulary, term: str) -> float:
    """log(N / n_i); zero for terms present in every document."""
    return math.log(vocab.corpus_size / vocab.document_frequency[term])


def tfidf(doc: TokenSequence, vocab: Vocabulary) -> TfIdfVector:
    """L2-normalized TF-IDF weights over in-vocabulary terms, sparse by index.

    TF is the raw in-document count. A document whose unnormalized weights are
    all zero maps to the empty (zero) vector.
    """
    counts = Counter(token for token in doc if token in vocab.term_to_index)
    raw = {vocab.term_to_index[term]: count * idf(vocab, term) for term, count in counts.items()}
    norm = math.sqrt(sum(weight * weight for weight in raw.values()))
    if norm == 0.0:
        return {}
    return {index: weight / norm for index, weight in raw.items() if weight != 0.0}


def tfidf_matrix(docs: Sequence[TokenSequence], vocab: Vocabulary) -> np.ndarray:
    matrix = np.zeros((len(docs), len(vocab)), dtype=np.float64)
    for row, doc in enumerate(docs):
        for index, weight in tfidf(doc, vocab).items():
            matrix[row, index] = weight
    return matrix


def encode_sequence(doc: TokenSequence, vocab: Vocabulary, max_len: int) -> EncodedSequence:
    """Map tokens to ids (UNK for unknown), truncate or PAD at the tail."""
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    ids = [vocab.index(token) for token in doc[:max_len]]
    true_length = len(ids)
    ids.extend([PAD_INDEX] * (max_len - true_length))
    return EncodedSequence(ids=ids, true_length=true_length)


def encode_batch(docs: Sequence[TokenSequence], vocab: Vocabulary, max_len: int):
    """(ids [n x max_len] int64, lengths [n] int64) for the neural models."""
    encoded = [encode_sequence(doc, vocab, max_len) for doc in docs]
    ids = np.array([item.ids for item in encoded], dtype=np.int64).reshape(len(encoded), max_len)
    lengths = np.array([item.true_length for item in encoded], dtype=np.int64)
    return ids, lengths


def default_max_len(docs: Sequence[TokenSequence],
                    percentile: float = training_defaults.MAX_LEN_PERCENTILE,
                    cap: int = training_defaults.MAX_LEN_CAP) -> int:
    """95th-percentile training length, capped; never below 1."""
    lengths = [len(doc) for doc in docs] or [1]
    return int(min(max(math.ceil(np.percentile(lengths, percentile)), 1), cap))


class TfIdfCentroidClassifier:
    """Cosine nearest-centroid over TF-IDF vectors; a reference point for the neural models."""

    def __init__(self, vocab: Vocabulary, n_classes: int = training_defaults.N_CLASSES):
        self.vocab = vocab
        self.n_classes = n_classes
        self.centroids: Optional[np.ndarray] = None

    def fit(self, docs: Sequence[TokenSequence], labels: Sequence[int]) -> "TfIdfCentroidClassifier":
        matrix = tfidf_matrix(docs, self.vocab)
        labels = np.asarray(labels)
        centroids = np.zeros((self.n_classes, matrix.shape[1]))
        for label in range(self.n_classes):
            members = matrix[labels == label]
            if len(members):
                centroids[label] = members.mean(axis=0)
        norms = np.linalg.norm(centroids, axis=1, keepdims=True)
        self.centroids = np.divide(centroids, norms, out=np.zeros_like(centroids), where=norms > 0)
        return self

    def predict(self, docs: Sequence[TokenSequence]) -> List[int]:
        if self.centroids is None:
            raise RuntimeError("classifier is not fitted")
        scores = tfidf_matrix(docs, self.vocab) @ self.centroids.T
        # argmax returns the lowest index on ties
        return scores.argmax(axis=1).tolist()
