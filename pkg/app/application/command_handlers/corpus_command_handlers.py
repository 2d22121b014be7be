"""
Command handlers for corpus preprocessing and feature fitting
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Tuple

from app.application.commands.classifier_commands import FitFeaturesCommand, PreprocessCommand, ResourcePaths
from app.application.manifest import MANIFEST_FILE, ManifestRecorder
from app.config.logging_config import logger
from app.config.run_config import RunConfig
from app.config.settings import settings
from app.domain.entities.corpus import LabeledCorpus, SplitSpec
from app.domain.entities.pipeline import TokenPipelineConfig
from app.domain.exceptions import TooFewSamplesException
from app.domain.repositories.corpus_repository import ICorpusRepository
from app.domain.repositories.resource_repository import IResourceRepository
from app.domain.services.corpus_splitter import split
from app.domain.services.preprocessing import fit_prune_set, run_pipeline_batch
from app.domain.services.vectorizer import fit_vocabulary, tfidf
from app.infrastructure.persistence.artifact_writer import write_json_lines
from app.infrastructure.persistence.vocabulary_store import save_pipeline, save_vocabulary


def split_with_fallback(corpus: LabeledCorpus, spec: SplitSpec) -> Tuple[LabeledCorpus, LabeledCorpus]:
    """Stratified split when every class can sit on both sides, a random split otherwise."""
    try:
        return split(corpus, spec)
    except TooFewSamplesException as e:
        if not spec.stratified or len(corpus) < 2:
            raise
        logger.warning(f"[SPLIT] Stratified split not possible ({e}); falling back to a random split")
        return split(corpus, spec.model_copy(update={"stratified": False}))


def record_resources(recorder: ManifestRecorder, resources: ResourcePaths):
    for path in (resources.stopwords, resources.stem_rules, resources.emots):
        recorder.add_input(path)


@dataclass(frozen=True)
class PreprocessResult:
    output: Path
    rows: int
    empty_rows: int


@dataclass(frozen=True)
class FitFeaturesResult:
    outputs: Dict[str, Path]
    vocabulary_size: int
    train_size: int
    test_size: int


class CorpusCommandHandler:
    """Command handler for preprocessing and feature fitting"""

    def __init__(self, corpus_repository: ICorpusRepository, resource_repository: IResourceRepository):
        self.corpus_repository = corpus_repository
        self.resource_repository = resource_repository

    def load_pipeline(self, resources: ResourcePaths, config: RunConfig) -> TokenPipelineConfig:
        return self.resource_repository.load_pipeline_config(
            stopwords=resources.stopwords,
            stem_rules=resources.stem_rules,
            emots=resources.emots,
            min_token_count=config.pipeline.min_token_count,
            keep_unknown_emoji=config.pipeline.keep_unknown_emoji,
        )

    def handle_preprocess(self, command: PreprocessCommand) -> PreprocessResult:
        """Handle preprocess command; no rare-token pruning, which needs a training split"""
        recorder = ManifestRecorder("preprocess", command.config.snapshot())
        corpus = self.corpus_repository.load(command.data)
        recorder.add_input(command.data)
        record_resources(recorder, command.resources)

        pipeline = self.load_pipeline(command.resources, command.config)
        tokens = run_pipeline_batch(corpus.texts, pipeline)
        out = settings.resolve_output(command.out)
        self.corpus_repository.save_preprocessed(corpus, tokens, out)
        recorder.add_outputs(out)
        recorder.write(out.parent / f"{out.stem}.{MANIFEST_FILE}")

        empty = sum(1 for doc in tokens if not doc)
        logger.info(f"[PREPROCESS] {len(tokens)} rows written to {out}; {empty} empty after preprocessing")
        return PreprocessResult(output=out, rows=len(tokens), empty_rows=empty)

    def handle_fit_features(self, command: FitFeaturesCommand) -> FitFeaturesResult:
        """Handle fit-features command"""
        config = command.config
        recorder = ManifestRecorder("fit-features", config.snapshot(), seed=config.split.seed)
        corpus = self.corpus_repository.load(command.data)
        recorder.add_input(command.data)
        record_resources(recorder, command.resources)

        train_corpus, test_corpus = split_with_fallback(corpus, config.split)
        pipeline = self.load_pipeline(command.resources, config)
        pipeline = fit_prune_set(train_corpus.texts, pipeline)
        train_docs = run_pipeline_batch(train_corpus.texts, pipeline)
        test_docs = run_pipeline_batch(test_corpus.texts, pipeline)
        vocab = fit_vocabulary(train_docs, config.pipeline.max_terms)

        out_dir = settings.resolve_output(command.out_dir)
        rows = [
            {"split": name, "label": sample.label.display_name,
             "tfidf": {str(index): weight for index, weight in sorted(tfidf(doc, vocab).items())}}
            for name, part, docs in (("train", train_corpus, train_docs), ("test", test_corpus, test_docs))
            for sample, doc in zip(part.samples, docs)
        ]
        outputs = {
            "vocabulary": save_vocabulary(vocab, out_dir / "vocabulary.tsv"),
            "pipeline": save_pipeline(pipeline, out_dir / "pipeline.json"),
            "tfidf": write_json_lines(rows, out_dir / "tfidf.jsonl"),
        }
        recorder.add_outputs(*outputs.values())
        outputs["manifest"] = recorder.write(out_dir / MANIFEST_FILE)
        logger.info(f"[FEATURES] Vocabulary of {len(vocab.terms)} terms fitted on {len(train_corpus)} documents")
        return FitFeaturesResult(outputs=outputs, vocabulary_size=len(vocab.terms),
                                 train_size=len(train_corpus), test_size=len(test_corpus))
