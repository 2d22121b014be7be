from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.domain.entities.corpus import LabeledCorpus, Sample, SplitSpec
from app.domain.entities.labels import (
    ClassLabel,
    N_CLASSES,
    class_names,
    decode_label,
    encode_label,
    one_hot,
    parse_label,
)
from app.domain.entities.model_spec import ModelSpec, TrainConfig
from app.domain.exceptions import (
    CorpusFileNotFoundException,
    DivergedLossException,
    DomainException,
    MalformedRowException,
    NonFiniteValueException,
    TooFewSamplesException,
    UnknownLabelException,
)
from app.domain.services.corpus_splitter import split, split_indices, train_size
from app.domain.services.early_stopping import EarlyStopping
from app.domain.services.metrics import compute_report, confusion_matrix


# --- labels ---

def test_canonical_class_order():
    assert [label.name for label in ClassLabel] == [
        "HateSpeech", "AggressiveComment", "ReligiousHatred", "EthnicalAttack",
        "ReligiousComment", "PoliticalComment", "SuicidalComment",
    ]
    assert N_CLASSES == 7


@pytest.mark.parametrize("name,index", [
    ("Hate Speech", 0),
    ("Suicidal Comment", 6),
    ("  Ethnical Attack ", 3),
    ("ReligiousHatred", 2),
])
def test_encode_label(name, index):
    assert encode_label(name) == index


def test_label_round_trip():
    for name in class_names():
        assert decode_label(encode_label(name)) == name


def test_one_hot():
    vector = one_hot(3)
    assert vector.shape == (7,)
    assert vector[3] == 1.0
    assert vector.sum() == 1.0


def test_unknown_label_carries_line_number():
    with pytest.raises(UnknownLabelException) as excinfo:
        parse_label("Foo", line_no=4)
    assert excinfo.value.value == "Foo"
    assert excinfo.value.line_no == 4
    assert "line 4" in str(excinfo.value)
    with pytest.raises(UnknownLabelException):
        decode_label(7)


def test_hateful_flags():
    assert [label.hateful for label in ClassLabel] == [True, True, True, True, False, False, False]


# --- corpus ---

def test_sample_rejects_blank_text():
    with pytest.raises(ValueError):
        Sample(text="   ", label=ClassLabel.HateSpeech)


def test_corpus_from_pairs_and_counts(sample_factory):
    samples = sample_factory.build_batch(14)
    corpus = LabeledCorpus(samples=tuple(samples))
    assert len(corpus) == 14
    assert all(count == 2 for count in corpus.class_counts().values())
    assert corpus.texts[0] == samples[0].text


def test_split_spec_bounds():
    with pytest.raises(ValueError):
        SplitSpec(train_fraction=1.0)
    with pytest.raises(ValueError):
        SplitSpec(train_fraction=0.0)


# --- split ---

def test_split_ten_samples():
    corpus = LabeledCorpus.from_pairs([(f"t{i}", i % 2) for i in range(10)])
    train, test = split(corpus, SplitSpec(train_fraction=0.8, seed=42, stratified=False))
    assert (len(train), len(test)) == (8, 2)
    assert not set(train.texts) & set(test.texts)


def test_split_is_deterministic(balanced_corpus, split_spec):
    first = split(balanced_corpus, split_spec)
    second = split(balanced_corpus, split_spec)
    assert first[0] == second[0] and first[1] == second[1]


def test_stratified_split_per_class(balanced_corpus, split_spec):
    train, test = split(balanced_corpus, split_spec)
    assert all(count == 8 for count in train.class_counts().values())
    assert all(count == 2 for count in test.class_counts().values())


def test_stratified_split_needs_two_per_class():
    corpus = LabeledCorpus.from_pairs([("a", 0), ("b", 0), ("c", 1)])
    with pytest.raises(TooFewSamplesException):
        split(corpus, SplitSpec(stratified=True))


def test_split_rejects_tiny_corpora():
    with pytest.raises(TooFewSamplesException):
        split(LabeledCorpus(), SplitSpec())
    with pytest.raises(TooFewSamplesException):
        train_size(1, 0.8)


@given(
    labels=st.lists(st.integers(min_value=0, max_value=6), min_size=2, max_size=60),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    fraction=st.floats(min_value=0.05, max_value=0.95),
)
@hypothesis_settings(max_examples=60, deadline=None)
def test_split_is_a_partition(labels, seed, fraction):
    spec = SplitSpec(train_fraction=fraction, seed=seed, stratified=False)
    train, test = split_indices(labels, spec)
    assert sorted(train + test) == list(range(len(labels)))
    assert len(train) == train_size(len(labels), fraction)


@given(
    sizes=st.lists(st.integers(min_value=5, max_value=15), min_size=1, max_size=7),
    seed=st.integers(min_value=0, max_value=1000),
)
@hypothesis_settings(max_examples=60, deadline=None)
def test_stratified_proportions_within_one(sizes, seed):
    labels = [label for label, size in enumerate(sizes) for _ in range(size)]
    train, test = split_indices(labels, SplitSpec(train_fraction=0.8, seed=seed, stratified=True))
    assert sorted(train + test) == list(range(len(labels)))
    counts = Counter(labels[i] for i in train)
    for label, size in enumerate(sizes):
        assert abs(counts[label] - 0.8 * size) < 1.0 + 1e-9
        assert 1 <= counts[label] <= size - 1


# --- early stopping ---

def test_early_stopping_patience_arithmetic():
    stopper = EarlyStopping(patience=3)
    losses = [1.0, 0.9, 0.95, 0.96, 0.97]
    decisions = [stopper(epoch, loss, state=f"weights@{epoch}") for epoch, loss in enumerate(losses, start=1)]
    assert decisions == [False, False, False, False, True]
    assert stopper.best_epoch == 2
    assert stopper.best_state == "weights@2"


def test_early_stopping_never_triggers_when_improving():
    stopper = EarlyStopping(patience=2)
    assert not any(stopper(epoch, 1.0 / epoch) for epoch in range(1, 30))
    assert stopper.best_epoch == 29


def test_early_stopping_min_delta_and_reset():
    stopper = EarlyStopping(patience=1, min_delta=0.1)
    stopper(1, 1.0)
    assert stopper(2, 0.95)
    stopper.reset()
    assert stopper.best_epoch == 0 and not stopper.should_stop


def test_early_stopping_rejects_zero_patience():
    with pytest.raises(ValueError):
        EarlyStopping(patience=0)


# --- metrics ---

def test_hand_computed_report():
    report = compute_report([0, 0, 1, 1], [0, 1, 1, 1])
    assert report.accuracy == pytest.approx(0.75)
    hate, aggressive = report.per_class[0], report.per_class[1]
    assert (hate.precision, hate.recall) == (pytest.approx(1.0), pytest.approx(0.5))
    assert (aggressive.precision, aggressive.recall) == (pytest.approx(2 / 3), pytest.approx(1.0))
    assert len(report.zero_support_classes) == 5
    assert report.macro.recall == pytest.approx(0.75)


def test_perfect_predictions():
    gold = list(range(7)) * 3
    report = compute_report(gold, gold)
    assert report.accuracy == 1.0
    assert all(m.f1 == 1.0 for m in report.per_class)
    assert report.binary.accuracy == 1.0


def test_degenerate_predictor():
    report = compute_report([0, 0, 1, 1], [1, 1, 1, 1])
    assert report.per_class[1].recall == 1.0
    assert report.per_class[0].recall == 0.0


def test_binary_view_collapses_hateful_classes():
    # HateSpeech predicted as EthnicalAttack stays inside the hateful block
    report = compute_report([0, 4, 5], [3, 4, 0])
    assert report.binary.confusion == [[1, 0], [1, 1]]
    assert report.binary.precision == pytest.approx(0.5)
    assert report.binary.recall == pytest.approx(1.0)


def test_report_length_mismatch():
    with pytest.raises(ValueError):
        compute_report([0, 1], [0])


def _brute_force(gold, predicted, label):
    tp = sum(1 for g, p in zip(gold, predicted) if g == label and p == label)
    predicted_count = sum(1 for p in predicted if p == label)
    support = sum(1 for g in gold if g == label)
    precision = tp / predicted_count if predicted_count else 0.0
    recall = tp / support if support else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1, support


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=80))
@hypothesis_settings(max_examples=50, deadline=None)
def test_metric_identities_against_brute_force(pairs):
    gold = [g for g, _ in pairs]
    predicted = [p for _, p in pairs]
    report = compute_report(gold, predicted)
    matrix = np.array(report.confusion)
    assert report.accuracy == pytest.approx(np.trace(matrix) / matrix.sum(), abs=1e-12)
    assert (matrix == confusion_matrix(gold, predicted)).all()
    for label, metrics in enumerate(report.per_class):
        precision, recall, f1, support = _brute_force(gold, predicted, label)
        assert metrics.precision == pytest.approx(precision, abs=1e-12)
        assert metrics.recall == pytest.approx(recall, abs=1e-12)
        assert metrics.f1 == pytest.approx(f1, abs=1e-12)
        assert metrics.support == support == matrix[label].sum()
        assert metrics.recall * support == pytest.approx(matrix[label, label], abs=1e-9)


# --- entities and exceptions ---

def test_model_spec_validation():
    assert ModelSpec().encoder_dim == 2 * ModelSpec().rnn_hidden
    with pytest.raises(ValueError):
        ModelSpec(n_classes=5)
    with pytest.raises(ValueError):
        ModelSpec(dropout_node=1.0)
    with pytest.raises(ValueError):
        ModelSpec(architecture="cnn")
    with pytest.raises(ValueError):
        TrainConfig(patience=0)
    with pytest.raises(ValueError):
        TrainConfig(validation_fraction=1.0)


def test_domain_exceptions():
    missing = CorpusFileNotFoundException("/tmp/none.csv")
    assert isinstance(missing, DomainException) and isinstance(missing, FileNotFoundError)
    assert "/tmp/none.csv" in str(missing)
    assert MalformedRowException(3).line_no == 3
    assert "epoch 4" in str(DivergedLossException(4))
    assert NonFiniteValueException("softmax").op_name == "softmax"
    assert str(DivergedLossException(1, "nan")) == "Loss diverged at epoch 1: nan"
