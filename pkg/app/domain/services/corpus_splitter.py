# app/domain/services/corpus_splitter.py
import math
from typing import Dict, List, Tuple

import numpy as np

from app.domain.entities.corpus import LabeledCorpus, SplitSpec
from app.domain.entities.labels import ClassLabel
from app.domain.exceptions import TooFewSamplesException


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def train_size(n: int, train_fraction: float) -> int:
    """round(train_fraction * n), clamped so both sides keep at least one sample."""
    if n < 2:
        raise TooFewSamplesException(f"need at least 2 samples to split, got {n}")
    return min(max(_round_half_up(train_fraction * n), 1), n - 1)


def _stratum_quotas(sizes: Dict[ClassLabel, int], train_fraction: float, target: int) -> Dict[ClassLabel, int]:
    """Largest-remainder allocation of `target` train slots over the strata.

    Every stratum keeps one sample on each side, so each quota lies in
    [1, size - 1] and differs from train_fraction * size by less than one.
    """
    for label, size in sizes.items():
        if size < 2:
            raise TooFewSamplesException(f"class {label.display_name!r} has {size} sample(s); stratified split needs 2")
    if not len(sizes) <= target <= sum(sizes.values()) - len(sizes):
        raise TooFewSamplesException(
            f"cannot place {target} of {sum(sizes.values())} samples in train with every class on both sides"
        )

    ideal = {label: train_fraction * size for label, size in sizes.items()}
    quotas = {label: min(max(math.floor(ideal[label]), 1), sizes[label] - 1) for label in sizes}
    remainder = target - sum(quotas.values())

    # Deterministic order: fractional part, then class index.
    if remainder > 0:
        order = sorted(sizes, key=lambda label: (-(ideal[label] - quotas[label]), int(label)))
        while remainder > 0:
            for label in order:
                if remainder == 0:
                    break
                if quotas[label] < sizes[label] - 1:
                    quotas[label] += 1
                    remainder -= 1
    elif remainder < 0:
        order = sorted(sizes, key=lambda label: (ideal[label] - quotas[label], int(label)))
        while remainder < 0:
            for label in order:
                if remainder == 0:
                    break
                if quotas[label] > 1:
                    quotas[label] -= 1
                    remainder += 1
    return quotas


def split_indices(labels: List[int], spec: SplitSpec) -> Tuple[List[int], List[int]]:
    n = len(labels)
    target = train_size(n, spec.train_fraction)
    rng = np.random.default_rng(spec.seed)

    if not spec.stratified:
        permutation = rng.permutation(n)
        return sorted(permutation[:target].tolist()), sorted(permutation[target:].tolist())

    by_class: Dict[ClassLabel, List[int]] = {}
    for index, label in enumerate(labels):
        by_class.setdefault(ClassLabel(label), []).append(index)
    quotas = _stratum_quotas({label: len(members) for label, members in by_class.items()}, spec.train_fraction, target)

    train, test = [], []
    for label in sorted(by_class):
        members = np.asarray(by_class[label])
        shuffled = members[rng.permutation(len(members))]
        train.extend(shuffled[: quotas[label]].tolist())
        test.extend(shuffled[quotas[label]:].tolist())
    return sorted(train), sorted(test)


def split(corpus: LabeledCorpus, spec: SplitSpec) -> Tuple[LabeledCorpus, LabeledCorpus]:
    """Deterministic disjoint train/test partition; both sides keep corpus order."""
    if len(corpus) == 0:
        raise TooFewSamplesException("cannot split an empty corpus")
    train_idx, test_idx = split_indices(corpus.labels, spec)
    return (
        corpus.subset(train_idx, source=f"{corpus.source}#train"),
        corpus.subset(test_idx, source=f"{corpus.source}#test"),
    )
