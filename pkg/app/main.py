# app/main.py

"""
Command-line interface for the Bangla hate-speech classifier.

Usage examples:
    bhs-classify preprocess --data comments.csv --out clean.csv
    bhs-classify fit-features --data comments.csv --out features/
    bhs-classify train --data comments.csv --arch attention --seed 7 --out runs/attention
    bhs-classify evaluate --model-dir runs/attention --data heldout.csv
    bhs-classify predict --model-dir runs/attention --text "..." --format json-lines
    bhs-classify report runs/lstm runs/gru runs/attention --out reports --svg
    bhs-classify export-plots --history runs/attention/history.csv --out plots

Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from app.application.commands.classifier_commands import (
    OUTPUT_FORMATS,
    EvaluateCommand,
    ExportPlotsCommand,
    FitFeaturesCommand,
    PredictCommand,
    PreprocessCommand,
    ReportCommand,
    ResourcePaths,
    TrainCommand,
)
from app.config.logging_config import logger
from app.config.run_config import RunConfig
from app.config.settings import settings
from app.domain.entities.model_spec import ARCHITECTURES
from app.domain.exceptions import DivergedLossException, DomainException, NonFiniteValueException
from app.infrastructure.models import Prediction
from app.infrastructure.reporting.tables import format_eval_report

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3


def _container():
    from app.container.container import container
    return container


def resource_paths(args) -> ResourcePaths:
    return ResourcePaths(stopwords=args.stopwords, stem_rules=args.stem_rules, emots=args.emot_dict)


def run_config(args) -> RunConfig:
    """Config file first, then whichever override flags this sub-command defines."""
    return RunConfig.from_file(args.config).with_overrides(
        seed=getattr(args, "seed", None),
        epochs=getattr(args, "epochs", None),
        batch_size=getattr(args, "batch_size", None),
        patience=getattr(args, "patience", None),
        max_len=getattr(args, "max_len", None),
    )


def format_prediction(prediction: Prediction, output_format: str, text: Optional[str] = None) -> str:
    if output_format == "json-lines":
        payload = {
            "label": prediction.label.display_name,
            "distribution": prediction.distribution,
            "empty_after_preprocessing": prediction.empty_after_preprocessing,
        }
        if text is not None:
            payload["text"] = text
        return json.dumps(payload, sort_keys=True, ensure_ascii=False)
    return "\t".join([prediction.label.display_name] + [f"{p:.6f}" for p in prediction.distribution])


# --- sub-commands ---

def cmd_preprocess(args) -> int:
    command = PreprocessCommand(data=args.data, out=args.out, resources=resource_paths(args), config=run_config(args))
    result = _container().corpus_command_handler.handle_preprocess(command)
    print(f"rows: {result.rows}, empty after preprocessing: {result.empty_rows}")
    return EXIT_OK


def cmd_fit_features(args) -> int:
    command = FitFeaturesCommand(data=args.data, out_dir=args.out, resources=resource_paths(args),
                                 config=run_config(args))
    result = _container().corpus_command_handler.handle_fit_features(command)
    print(f"vocabulary: {result.vocabulary_size} terms, train: {result.train_size}, test: {result.test_size}")
    return EXIT_OK


def cmd_train(args) -> int:
    command = TrainCommand(data=args.data, architecture=args.arch, out_dir=args.out,
                           resources=resource_paths(args), config=run_config(args))
    result = _container().model_command_handler.handle_train(command)
    if args.format == "json-lines":
        print(json.dumps(result.report.model_dump(mode="json"), sort_keys=True, ensure_ascii=False))
    else:
        print(format_eval_report(result.report), end="")
        print(f"epochs run: {result.epochs_run}; artifacts in {result.out_dir}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    command = EvaluateCommand(model_dir=args.model_dir, data=args.data, out_dir=args.out)
    report = _container().model_command_handler.handle_evaluate(command)
    if args.format == "json-lines":
        print(json.dumps(report.model_dump(mode="json"), sort_keys=True, ensure_ascii=False))
    else:
        print(format_eval_report(report), end="")
    return EXIT_OK


def cmd_predict(args) -> int:
    command = PredictCommand(model_dir=args.model_dir, texts=tuple(args.text or ()), data=args.data)
    predictions = _container().model_command_handler.handle_predict(command)
    texts: Sequence[Optional[str]] = command.texts or [None] * len(predictions)
    for prediction, text in zip(predictions, texts):
        print(format_prediction(prediction, args.format, text))
    return EXIT_OK


def cmd_report(args) -> int:
    command = ReportCommand(run_dirs=tuple(args.run_dirs), out_dir=args.out, svg=args.svg)
    result = _container().report_command_handler.handle_report(command)
    print(result.text, end="")
    return EXIT_OK


def cmd_export_plots(args) -> int:
    command = ExportPlotsCommand(history=args.history, out_dir=args.out, metric=args.metric)
    outputs = _container().report_command_handler.handle_export_plots(command)
    print(outputs["chart"])
    return EXIT_OK


# --- parser ---

def _add_resource_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--stopwords", type=Path, help="Stopword list (one word per line)")
    parser.add_argument("--stem-rules", type=Path, help="Stem rule table (TSV)")
    parser.add_argument("--emot-dict", type=Path, help="Emot dictionary (TSV)")


def _add_config_flag(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=Path, help="Run configuration JSON")


def _add_format_flag(parser: argparse.ArgumentParser):
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default="text",
                        help="Output format (default: text)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bhs-classify", description=settings.PROJECT_NAME)
    parser.add_argument("--version", action="version", version=settings.VERSION)
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    preprocess_parser = subparsers.add_parser("preprocess", help="Run the token pipeline over a labelled CSV")
    preprocess_parser.add_argument("--data", type=Path, required=True, help="Input CSV with text,label columns")
    preprocess_parser.add_argument("--out", type=Path, required=True, help="Output CSV path")
    _add_resource_flags(preprocess_parser)
    _add_config_flag(preprocess_parser)

    features_parser = subparsers.add_parser("fit-features", help="Fit vocabulary and export TF-IDF vectors")
    features_parser.add_argument("--data", type=Path, required=True, help="Input CSV with text,label columns")
    features_parser.add_argument("--out", type=Path, required=True, help="Output directory")
    features_parser.add_argument("--seed", type=int, help="Split seed")
    _add_resource_flags(features_parser)
    _add_config_flag(features_parser)

    train_parser = subparsers.add_parser("train", help="Train and evaluate one architecture")
    train_parser.add_argument("--data", type=Path, required=True, help="Input CSV with text,label columns")
    train_parser.add_argument("--arch", choices=ARCHITECTURES, required=True, help="Decoder architecture")
    train_parser.add_argument("--out", type=Path, required=True, help="Run directory")
    train_parser.add_argument("--seed", type=int, help="Seed for the split, initialization, shuffling and dropout")
    train_parser.add_argument("--epochs", type=int, help="Maximum number of epochs")
    train_parser.add_argument("--batch-size", type=int, help="Minibatch size")
    train_parser.add_argument("--patience", type=int, help="Early-stopping patience in epochs")
    train_parser.add_argument("--max-len", type=int, help="Sequence length (default: 95th percentile, capped)")
    _add_resource_flags(train_parser)
    _add_config_flag(train_parser)
    _add_format_flag(train_parser)

    evaluate_parser = subparsers.add_parser("evaluate", help="Score a trained model on a labelled CSV")
    evaluate_parser.add_argument("--model-dir", type=Path, required=True, help="Trained model directory")
    evaluate_parser.add_argument("--data", type=Path, required=True, help="Labelled CSV")
    evaluate_parser.add_argument("--out", type=Path, help="Write report.json and report.txt here")
    _add_format_flag(evaluate_parser)

    predict_parser = subparsers.add_parser("predict", help="Classify raw texts")
    predict_parser.add_argument("--model-dir", type=Path, required=True, help="Trained model directory")
    predict_parser.add_argument("--text", action="append", help="Text to classify (repeatable)")
    predict_parser.add_argument("--data", type=Path, help="CSV whose text column is classified")
    _add_format_flag(predict_parser)

    report_parser = subparsers.add_parser("report", help="Compare finished runs")
    report_parser.add_argument("run_dirs", type=Path, nargs="+", help="Run directories holding report.json")
    report_parser.add_argument("--out", type=Path, help="Write comparison.txt (and charts) here")
    report_parser.add_argument("--svg", action="store_true", help="Also chart each run's history.csv")

    plots_parser = subparsers.add_parser("export-plots", help="Chart a history CSV as SVG")
    plots_parser.add_argument("--history", type=Path, required=True, help="history.csv from a train run")
    plots_parser.add_argument("--out", type=Path, required=True, help="Output directory")
    plots_parser.add_argument("--metric", choices=("acc", "loss"), default="acc", help="Metric to chart")

    return parser


COMMANDS = {
    "preprocess": cmd_preprocess,
    "fit-features": cmd_fit_features,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "predict": cmd_predict,
    "report": cmd_report,
    "export-plots": cmd_export_plots,
}


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, dispatch, and translate failures into exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT_ERROR

    if not args.command:
        parser.print_help()
        return EXIT_INPUT_ERROR

    logger.debug(f"Starting command: {args.command}")
    try:
        return COMMANDS[args.command](args)
    except (DivergedLossException, NonFiniteValueException) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE
    except (DomainException, ValueError, FileNotFoundError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
