import warnings

import numpy as np
import pytest

from app.domain.entities.corpus import CorpusSchema, LabeledCorpus
from app.domain.entities.model_spec import RunManifest, TrainingHistory
from app.domain.exceptions import (
    ChecksumMismatchException,
    CorpusFileNotFoundException,
    FormatVersionMismatchException,
    MalformedRowException,
    UnknownLabelException,
    VocabHashMismatchException,
    VocabHashMismatchWarning,
)
from app.domain.services.metrics import compute_report
from app.domain.services.vectorizer import fit_vocabulary
from app.infrastructure.models import TrainedModel, build_model
from app.infrastructure.persistence import artifact_writer
from app.infrastructure.persistence.model_store import load_model, read_header, save_model
from app.infrastructure.persistence.repositories import (
    CsvCorpusRepository,
    FileResourceRepository,
    ModelDirectoryRepository,
)
from app.infrastructure.persistence.vocabulary_store import (
    load_pipeline,
    load_vocabulary,
    save_pipeline,
    save_vocabulary,
)

CSV_TEXT = "text,label\nহাত ভেঙে দিয়েছিলাম,Hate Speech\n\"ভালো, খুব ভালো\",Political Comment\n"


@pytest.fixture
def repository():
    return CsvCorpusRepository()


@pytest.fixture
def vocabulary():
    return fit_vocabulary([["হাত", "ভেঙে"], ["হাত", "দেই"], ["😡"]])


@pytest.fixture
def trained(vocabulary, small_pipeline, model_spec_factory):
    spec = model_spec_factory(architecture="attention", vocab_size=len(vocabulary))
    return TrainedModel(build_model(spec, seed=4), vocabulary, small_pipeline.config_hash())


# --- corpus CSV ---

def test_load_corpus_preserves_order(tmp_path, repository):
    path = tmp_path / "corpus.csv"
    path.write_text(CSV_TEXT, encoding="utf-8")
    corpus = repository.load(path)
    assert len(corpus) == 2
    assert corpus.texts == ["হাত ভেঙে দিয়েছিলাম", "ভালো, খুব ভালো"]
    assert corpus.labels == [0, 5]
    assert corpus.source == str(path)


def test_bom_and_crlf_parse_identically(tmp_path, repository):
    plain = tmp_path / "plain.csv"
    plain.write_bytes(CSV_TEXT.encode("utf-8"))
    windows = tmp_path / "windows.csv"
    windows.write_bytes(b"\xef\xbb\xbf" + CSV_TEXT.replace("\n", "\r\n").encode("utf-8"))
    assert repository.load(windows).samples == repository.load(plain).samples


def test_unknown_label_names_the_row(tmp_path, repository):
    path = tmp_path / "corpus.csv"
    path.write_text("text,label\nক,Hate Speech\nখ,Foo\n", encoding="utf-8")
    with pytest.raises(UnknownLabelException) as excinfo:
        repository.load(path)
    assert excinfo.value.line_no == 3
    assert excinfo.value.value == "Foo"


def test_line_numbers_count_physical_lines(tmp_path, repository):
    path = tmp_path / "corpus.csv"
    path.write_text('text,label\n"দুই\nলাইন",Hate Speech\n\nখ,Foo\n', encoding="utf-8")
    with pytest.raises(UnknownLabelException) as excinfo:
        repository.load(path)
    assert excinfo.value.line_no == 5


def test_ragged_row_reports_its_line(tmp_path, repository):
    path = tmp_path / "corpus.csv"
    path.write_text("text,label\nক,Hate Speech\nখ,Hate Speech,extra\n", encoding="utf-8")
    with pytest.raises(MalformedRowException) as excinfo:
        repository.load(path)
    assert excinfo.value.line_no == 3


def test_empty_text_is_malformed(tmp_path, repository):
    path = tmp_path / "corpus.csv"
    path.write_text("text,label\n\"  \",Hate Speech\n", encoding="utf-8")
    with pytest.raises(MalformedRowException) as excinfo:
        repository.load(path)
    assert excinfo.value.line_no == 2


def test_missing_header_column(tmp_path, repository):
    path = tmp_path / "corpus.csv"
    path.write_text("comment,label\nক,Hate Speech\n", encoding="utf-8")
    with pytest.raises(MalformedRowException):
        repository.load(path)
    assert len(repository.load(path, CorpusSchema(text_column="comment"))) == 1


def test_invalid_utf8_reports_line(tmp_path, repository):
    path = tmp_path / "corpus.csv"
    path.write_bytes(b"text,label\nok,Hate Speech\n\xff\xfe,Hate Speech\n")
    with pytest.raises(MalformedRowException) as excinfo:
        repository.load(path)
    assert excinfo.value.line_no == 3


def test_missing_corpus_file(tmp_path, repository):
    with pytest.raises(CorpusFileNotFoundException) as excinfo:
        repository.load(tmp_path / "absent.csv")
    assert "absent.csv" in str(excinfo.value)


def test_save_then_load_corpus(tmp_path, repository, balanced_corpus):
    path = repository.save(balanced_corpus, tmp_path / "out" / "corpus.csv")
    assert repository.load(path).samples == balanced_corpus.samples


def test_save_preprocessed_adds_token_column(tmp_path, repository):
    corpus = LabeledCorpus.from_pairs([("আমি হাত", 0), ("ভালো", 4)])
    path = repository.save_preprocessed(corpus, [["হাত"], []], tmp_path / "clean.csv")
    assert path.read_text(encoding="utf-8").splitlines() == [
        "text,tokens,label", "আমি হাত,হাত,Hate Speech", "ভালো,,Religious Comment",
    ]
    assert repository.load_texts(path) == ["আমি হাত", "ভালো"]


# --- resources ---

def test_shipped_resources_load(resource_repository):
    assert "আমি" in resource_repository.load_stopwords()
    rules = resource_repository.load_stem_rules()
    assert rules.exception_root("দিয়েছিলাম") == "দেই"
    assert resource_repository.load_emot_dictionary().lookup("😡") == "ঘৃণা"


def test_custom_resource_files(tmp_path, resource_repository):
    stopwords = tmp_path / "stop.txt"
    stopwords.write_text("# comment\nএবং\n\nবা\n", encoding="utf-8")
    emots = tmp_path / "emots.tsv"
    emots.write_text("key\tbangla_word\tenglish_gloss\n:'(\tকান্না\tcrying\n", encoding="utf-8")
    config = resource_repository.load_pipeline_config(stopwords=stopwords, emots=emots, min_token_count=2)
    assert config.stopwords.words == frozenset({"এবং", "বা"})
    assert config.emots.lookup(":'(") == "কান্না"
    assert config.min_token_count == 2


def test_duplicate_emot_key_is_malformed(tmp_path, resource_repository):
    emots = tmp_path / "emots.tsv"
    emots.write_text("key\tbangla_word\tenglish_gloss\n:)\tখুশি\ta\n:)\tহাসি\tb\n", encoding="utf-8")
    with pytest.raises(MalformedRowException) as excinfo:
        resource_repository.load_emot_dictionary(emots)
    assert excinfo.value.line_no == 3


def test_resource_errors_count_comment_and_blank_lines(tmp_path, resource_repository):
    emots = tmp_path / "emots.tsv"
    emots.write_text("key\tbangla_word\tenglish_gloss\n# happy\n:)\tখুশি\ta\n\n:)\tহাসি\tb\n", encoding="utf-8")
    with pytest.raises(MalformedRowException) as excinfo:
        resource_repository.load_emot_dictionary(emots)
    assert excinfo.value.line_no == 5

    rules = tmp_path / "rules.tsv"
    rules.write_text("category\tsuffix\treplacement\tmin_stem_length\n\n# verbs\nverbal\tছে\t\t2\nexception\tদিলাম\t\t\n",
                     encoding="utf-8")
    with pytest.raises(MalformedRowException) as excinfo:
        resource_repository.load_stem_rules(rules)
    assert excinfo.value.line_no == 5


def test_missing_resource_file(tmp_path):
    with pytest.raises(CorpusFileNotFoundException):
        FileResourceRepository(tmp_path).load_stopwords()


# --- vocabulary / pipeline files ---

def test_vocabulary_file_round_trip(tmp_path, vocabulary):
    path = save_vocabulary(vocabulary, tmp_path / "vocabulary.tsv")
    assert path.read_text(encoding="utf-8").startswith("# format_version=1\tN=3\n")
    loaded = load_vocabulary(path)
    assert loaded == vocabulary
    assert loaded.content_hash() == vocabulary.content_hash()


def test_vocabulary_version_mismatch(tmp_path, vocabulary):
    path = tmp_path / "vocabulary.tsv"
    path.write_text(vocabulary.to_tsv(format_version=9), encoding="utf-8")
    with pytest.raises(FormatVersionMismatchException):
        load_vocabulary(path)
    path.write_text("term\tindex\n", encoding="utf-8")
    with pytest.raises(MalformedRowException):
        load_vocabulary(path)


def test_pipeline_snapshot_round_trip(tmp_path, small_pipeline):
    config = small_pipeline.with_prune_set({"ক"})
    loaded = load_pipeline(save_pipeline(config, tmp_path / "pipeline.json"))
    assert loaded.config_hash() == config.config_hash()
    assert loaded.prune_set == frozenset({"ক"})


# --- model file ---

def test_model_round_trip_is_bit_identical(tmp_path, trained, vocabulary, small_pipeline):
    path = save_model(trained, tmp_path / "model.bin")
    loaded = load_model(path, vocabulary, small_pipeline.config_hash(), strict=True)
    assert loaded.spec == trained.spec
    original, restored = trained.classifier.state_dict(), loaded.classifier.state_dict()
    assert list(original) == list(restored)
    for name in original:
        assert original[name].tobytes() == restored[name].tobytes()
    ids, lengths = np.array([[2, 3, 4, 0, 0]]), np.array([3])
    assert np.array_equal(trained.classifier.predict_proba(ids, lengths),
                          loaded.classifier.predict_proba(ids, lengths))
    assert save_model(loaded, tmp_path / "again.bin").read_bytes() == path.read_bytes()


def test_read_header(tmp_path, trained, small_pipeline):
    spec, vocab_hash, pipeline_hash = read_header(save_model(trained, tmp_path / "model.bin"))
    assert spec.architecture == "attention"
    assert vocab_hash == trained.vocab_hash
    assert pipeline_hash == small_pipeline.config_hash()


@pytest.mark.parametrize("cut", [1, 100, 2000])
def test_truncated_model_fails_checksum(tmp_path, trained, vocabulary, cut):
    path = save_model(trained, tmp_path / "model.bin")
    path.write_bytes(path.read_bytes()[:-cut])
    with pytest.raises(ChecksumMismatchException):
        load_model(path, vocabulary)


def test_flipped_byte_fails_checksum(tmp_path, trained, vocabulary):
    path = save_model(trained, tmp_path / "model.bin")
    payload = bytearray(path.read_bytes())
    payload[len(payload) // 2] ^= 0x01
    path.write_bytes(bytes(payload))
    with pytest.raises(ChecksumMismatchException):
        load_model(path, vocabulary)


def test_vocabulary_mismatch_warns_or_raises(tmp_path, trained):
    path = save_model(trained, tmp_path / "model.bin")
    other = fit_vocabulary([["অন্য"], ["শব্দ"]])
    with pytest.warns(VocabHashMismatchWarning):
        loaded = load_model(path, other)
    assert loaded.vocabulary is other
    with pytest.raises(VocabHashMismatchException):
        load_model(path, other, strict=True)


def test_pipeline_mismatch_is_detected(tmp_path, trained, vocabulary):
    path = save_model(trained, tmp_path / "model.bin")
    with pytest.raises(VocabHashMismatchException):
        load_model(path, vocabulary, pipeline_hash="0" * 64, strict=True)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        load_model(path, vocabulary, pipeline_hash=trained.pipeline_hash)


# --- model directory ---

def test_model_directory_round_trip(tmp_path, trained, small_pipeline):
    repository = ModelDirectoryRepository()
    paths = repository.save(trained, small_pipeline, tmp_path / "run")
    assert sorted(paths) == ["model", "pipeline", "vocabulary"]
    loaded, pipeline = repository.load(tmp_path / "run")
    assert pipeline.config_hash() == small_pipeline.config_hash()
    assert loaded.vocabulary == trained.vocabulary


def test_model_directory_detects_swapped_vocabulary(tmp_path, trained, small_pipeline):
    repository = ModelDirectoryRepository()
    repository.save(trained, small_pipeline, tmp_path / "run")
    save_vocabulary(fit_vocabulary([["অন্য"]]), tmp_path / "run" / "vocabulary.tsv")
    with pytest.raises(VocabHashMismatchException):
        repository.load(tmp_path / "run")
    with pytest.warns(VocabHashMismatchWarning):
        repository.load(tmp_path / "run", strict=False)


def test_model_directory_missing_file(tmp_path):
    with pytest.raises(CorpusFileNotFoundException) as excinfo:
        ModelDirectoryRepository().load(tmp_path)
    assert "model.bin" in str(excinfo.value)


# --- artifacts ---

def test_history_csv_round_trip(tmp_path, epoch_records):
    path = artifact_writer.write_history_csv(TrainingHistory(epochs=epoch_records), tmp_path / "history.csv")
    assert path.read_text(encoding="utf-8").splitlines()[0] == "epoch,train_loss,train_acc,val_loss,val_acc"
    assert artifact_writer.read_history_csv(path) == epoch_records


def test_history_csv_rejects_non_numeric(tmp_path):
    path = tmp_path / "history.csv"
    path.write_text("epoch,train_loss,train_acc,val_loss,val_acc\n1,x,0.5,1.0,0.4\n", encoding="utf-8")
    with pytest.raises(MalformedRowException):
        artifact_writer.read_history_csv(path)


def test_report_json_round_trip(tmp_path):
    report = compute_report([0, 1, 2, 2], [0, 2, 2, 2], architecture="gru")
    path = artifact_writer.write_report_json(report, tmp_path / "report.json")
    assert artifact_writer.read_report_json(path) == report
    with pytest.raises(CorpusFileNotFoundException):
        artifact_writer.read_report_json(tmp_path / "absent.json")


def test_json_lines_and_manifest(tmp_path):
    path = artifact_writer.write_json_lines([{"b": 1, "a": "হাত"}, {"a": 2}], tmp_path / "rows.jsonl")
    assert path.read_text(encoding="utf-8") == '{"a": "হাত", "b": 1}\n{"a": 2}\n'
    manifest = RunManifest(command="train", tool_version="0.3.0", started_at="t0", finished_at="t1", seed=7)
    written = artifact_writer.write_manifest(manifest, tmp_path / "nested" / "manifest.json")
    assert '"command": "train"' in written.read_text(encoding="utf-8")
