import json

import numpy as np
import pandas as pd
import pytest
import factory

from app.config.run_config import RunConfig
from app.domain.entities.corpus import LabeledCorpus, Sample, SplitSpec
from app.domain.entities.labels import ClassLabel, N_CLASSES
from app.domain.entities.model_spec import EpochRecord, ModelSpec, TrainConfig
from app.domain.entities.pipeline import EmotDictionary, StemRule, StemRuleTable, StopwordSet, TokenPipelineConfig
from app.infrastructure.persistence.repositories.file_resource_repository import FileResourceRepository


class SampleFactory(factory.Factory):
    class Meta:
        model = Sample
    text = factory.Sequence(lambda n: f"মন্তব্য {n}")
    label = factory.Iterator(list(ClassLabel))


class ModelSpecFactory(factory.Factory):
    """Tiny layer sizes so forward/backward passes stay fast in unit tests."""
    class Meta:
        model = ModelSpec
    architecture = "attention"
    embed_dim = 3
    kernel_width = 2
    conv_channels = 3
    rnn_hidden = 2
    attention_dim = 3
    dropout_node = 0.0
    dropout_recurrent = 0.0
    max_len = 5
    vocab_size = 9


class TrainConfigFactory(factory.Factory):
    class Meta:
        model = TrainConfig
    learning_rate = 1e-2
    batch_size = 8
    max_epochs = 5
    patience = 2
    seed = 7


class EpochRecordFactory(factory.Factory):
    class Meta:
        model = EpochRecord
    epoch = factory.Sequence(lambda n: n + 1)
    train_loss = factory.LazyAttribute(lambda o: 2.0 / o.epoch)
    train_acc = factory.LazyAttribute(lambda o: min(1.0, 0.1 * o.epoch))
    val_loss = factory.LazyAttribute(lambda o: 2.2 / o.epoch)
    val_acc = factory.LazyAttribute(lambda o: min(1.0, 0.08 * o.epoch))


def synthetic_texts(n_per_class: int, seed: int = 0, keywords: int = 3, noise: int = 5, length: int = 6):
    """Each class is keyed by class-exclusive tokens cls{c}w{j} mixed with shared noise{j} tokens."""
    rng = np.random.default_rng(seed)
    rows = []
    for label in ClassLabel:
        for _ in range(n_per_class):
            tokens = [f"cls{int(label)}w{rng.integers(keywords)}" for _ in range(length // 2)]
            tokens += [f"noise{rng.integers(noise)}" for _ in range(length - length // 2)]
            rng.shuffle(tokens)
            rows.append((" ".join(tokens), label.display_name))
    order = rng.permutation(len(rows))
    return [rows[i] for i in order]


def write_corpus_csv(path, rows):
    pd.DataFrame(rows, columns=["text", "label"]).to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    return path


@pytest.fixture
def sample_factory():
    return SampleFactory


@pytest.fixture
def model_spec_factory():
    return ModelSpecFactory


@pytest.fixture
def train_config_factory():
    return TrainConfigFactory


@pytest.fixture
def epoch_records():
    EpochRecordFactory.reset_sequence()
    return EpochRecordFactory.build_batch(10)


@pytest.fixture
def balanced_corpus():
    """70 samples, 10 per class."""
    return LabeledCorpus.from_pairs(
        [(f"মন্তব্য {label} {i}", label) for label in range(N_CLASSES) for i in range(10)]
    )


@pytest.fixture
def split_spec():
    return SplitSpec(train_fraction=0.8, seed=42, stratified=True)


@pytest.fixture(scope="session")
def resource_repository():
    return FileResourceRepository()


@pytest.fixture(scope="session")
def shipped_pipeline(resource_repository):
    return resource_repository.load_pipeline_config()


@pytest.fixture
def small_pipeline():
    return TokenPipelineConfig(
        stopwords=StopwordSet(words=frozenset({"আমি", "ওর"})),
        stem_rules=StemRuleTable(
            rules=(StemRule(category="nominal", suffix="গুলি", replacement="", min_stem_length=1),),
            exceptions={"দিয়েছিলাম": "দেই"},
        ),
        emots=EmotDictionary(entries={"😡": "ঘৃণা", ":-D": "হাসি"}),
        min_token_count=1,
    )


@pytest.fixture
def synthetic_csv(tmp_path):
    return write_corpus_csv(tmp_path / "synthetic.csv", synthetic_texts(10, seed=3))



TINY_RUN_CONFIG = {
    "model": {"embed_dim": 4, "kernel_width": 2, "conv_channels": 4, "rnn_hidden": 3, "attention_dim": 4,
              "dropout_node": 0.0, "dropout_recurrent": 0.0, "max_len": 6},
    "train": {"learning_rate": 1e-2, "batch_size": 16, "max_epochs": 2, "patience": 2, "seed": 1},
    "pipeline": {"min_token_count": 1},
}


@pytest.fixture
def tiny_run_config():
    return RunConfig(**TINY_RUN_CONFIG)


@pytest.fixture
def tiny_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(TINY_RUN_CONFIG), encoding="utf-8")
    return path
