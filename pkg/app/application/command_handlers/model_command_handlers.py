"""
Command handlers for training, evaluating and applying the classifiers
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List

from app.application.command_handlers.corpus_command_handlers import (
    CorpusCommandHandler,
    record_resources,
    split_with_fallback,
)
from app.application.commands.classifier_commands import EvaluateCommand, PredictCommand, TrainCommand
from app.application.manifest import MANIFEST_FILE, ManifestRecorder
from app.config.logging_config import logger
from app.config.settings import settings
from app.domain.entities.corpus import LabeledCorpus
from app.domain.entities.model_spec import EvalReport, ModelSpec
from app.domain.entities.pipeline import TokenSequence
from app.domain.entities.vocabulary import Vocabulary
from app.domain.repositories.corpus_repository import ICorpusRepository
from app.domain.repositories.model_repository import IModelRepository
from app.domain.repositories.resource_repository import IResourceRepository
from app.domain.services.preprocessing import fit_prune_set, run_pipeline_batch
from app.domain.services.vectorizer import TfIdfCentroidClassifier, default_max_len, encode_batch, fit_vocabulary
from app.infrastructure.models import EncodedDataset, Prediction, TrainedModel, build_model, evaluate, predict_many, train
from app.infrastructure.persistence.artifact_writer import write_history_csv, write_report_json, write_text
from app.infrastructure.reporting.tables import format_eval_report

HISTORY_FILE = "history.csv"
REPORT_JSON_FILE = "report.json"
REPORT_TEXT_FILE = "report.txt"


def encode_corpus(corpus: LabeledCorpus, docs: List[TokenSequence], vocab: Vocabulary, max_len: int) -> EncodedDataset:
    ids, lengths = encode_batch(docs, vocab, max_len)
    return EncodedDataset.from_arrays(ids, lengths, corpus.labels)


def write_report(report: EvalReport, out_dir: Path) -> Dict[str, Path]:
    return {
        "report_json": write_report_json(report, out_dir / REPORT_JSON_FILE),
        "report_text": write_text(format_eval_report(report), out_dir / REPORT_TEXT_FILE),
    }


@dataclass(frozen=True)
class TrainResult:
    out_dir: Path
    report: EvalReport
    outputs: Dict[str, Path]
    epochs_run: int


class ModelCommandHandler:
    """Command handler for the train, evaluate and predict commands"""

    def __init__(
        self,
        corpus_repository: ICorpusRepository,
        resource_repository: IResourceRepository,
        model_repository: IModelRepository,
    ):
        self.corpus_repository = corpus_repository
        self.resource_repository = resource_repository
        self.model_repository = model_repository
        self._corpus_handler = CorpusCommandHandler(corpus_repository, resource_repository)

    def handle_train(self, command: TrainCommand) -> TrainResult:
        """Handle train command: split, preprocess, fit, train, evaluate, persist"""
        config = command.config
        recorder = ManifestRecorder("train", config.snapshot(), seed=config.train.seed)
        corpus = self.corpus_repository.load(command.data)
        recorder.add_input(command.data)
        record_resources(recorder, command.resources)

        train_corpus, test_corpus = split_with_fallback(corpus, config.split)
        pipeline = fit_prune_set(train_corpus.texts, self._corpus_handler.load_pipeline(command.resources, config))
        train_docs = run_pipeline_batch(train_corpus.texts, pipeline)
        test_docs = run_pipeline_batch(test_corpus.texts, pipeline)
        vocab = fit_vocabulary(train_docs, config.pipeline.max_terms)

        overrides = config.model
        kernel_width = overrides.kernel_width or ModelSpec().kernel_width
        max_len = overrides.max_len or max(default_max_len(train_docs), kernel_width)
        spec = ModelSpec(architecture=command.architecture, vocab_size=len(vocab),
                         max_len=max_len, **overrides.as_kwargs())
        logger.info(f"[TRAIN] {spec.architecture}: vocabulary {len(vocab.terms)} terms, max_len {max_len}, "
                    f"{len(train_corpus)} train / {len(test_corpus)} test samples")

        classifier = build_model(spec, config.train.seed)
        classifier, history = train(classifier, encode_corpus(train_corpus, train_docs, vocab, max_len), config.train)

        baseline = TfIdfCentroidClassifier(vocab).fit(train_docs, train_corpus.labels)
        baseline_predictions = baseline.predict(test_docs)
        baseline_accuracy = sum(p == g for p, g in zip(baseline_predictions, test_corpus.labels)) / len(test_corpus)

        report = evaluate(classifier, encode_corpus(test_corpus, test_docs, vocab, max_len)).model_copy(update={
            "train_seconds": history.train_seconds,
            "peak_memory_mb": history.peak_memory_mb,
            "baseline_accuracy": baseline_accuracy,
            "empty_after_preprocessing": sum(1 for doc in test_docs if not doc),
        })

        out_dir = settings.resolve_output(command.out_dir)
        trained = TrainedModel(classifier, vocab, pipeline.config_hash(), history)
        outputs = dict(self.model_repository.save(trained, pipeline, out_dir))
        outputs["history"] = write_history_csv(history, out_dir / HISTORY_FILE)
        outputs.update(write_report(report, out_dir))
        recorder.add_outputs(*outputs.values())
        outputs["manifest"] = recorder.write(out_dir / MANIFEST_FILE)

        logger.info(f"[TRAIN] {spec.architecture} test accuracy {report.accuracy:.4f} "
                    f"(TF-IDF baseline {baseline_accuracy:.4f}); artifacts in {out_dir}")
        return TrainResult(out_dir=out_dir, report=report, outputs=outputs, epochs_run=history.epochs_run)

    def handle_evaluate(self, command: EvaluateCommand) -> EvalReport:
        """Handle evaluate command against a labelled CSV"""
        trained, pipeline = self.model_repository.load(command.model_dir)
        corpus = self.corpus_repository.load(command.data)
        docs = run_pipeline_batch(corpus.texts, pipeline)
        data = encode_corpus(corpus, docs, trained.vocabulary, trained.spec.max_len)
        report = evaluate(trained.classifier, data).model_copy(update={
            "empty_after_preprocessing": sum(1 for doc in docs if not doc),
        })

        if command.out_dir is not None:
            recorder = ManifestRecorder("evaluate", {"model_dir": str(command.model_dir)})
            recorder.add_input(command.data)
            out_dir = settings.resolve_output(command.out_dir)
            outputs = write_report(report, out_dir)
            recorder.add_outputs(*outputs.values())
            recorder.write(out_dir / MANIFEST_FILE)
        logger.info(f"[EVALUATE] {report.architecture} accuracy {report.accuracy:.4f} on {report.total} samples")
        return report

    def handle_predict(self, command: PredictCommand) -> List[Prediction]:
        """Handle predict command for inline texts or the text column of a CSV"""
        trained, pipeline = self.model_repository.load(command.model_dir)
        texts = list(command.texts) if command.texts else self.corpus_repository.load_texts(command.data)
        predictions = predict_many(trained, texts, pipeline)
        empty = sum(1 for prediction in predictions if prediction.empty_after_preprocessing)
        if empty:
            logger.warning(f"[PREDICT] {empty} of {len(predictions)} texts were empty after preprocessing")
        return predictions
