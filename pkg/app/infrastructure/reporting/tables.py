# app/infrastructure/reporting/tables.py
"""Plain-text report tables built with pandas."""
from collections import Counter
from typing import List, Sequence, Tuple

import pandas as pd

from app.domain.entities.labels import class_names
from app.domain.entities.model_spec import EvalReport

COMPARISON_COLUMNS = ["Architecture", "Memory usage (MB)", "Training time (s)", "Accuracy (%)"]

Run = Tuple[str, EvalReport]


def run_labels(runs: Sequence[Run]) -> List[str]:
    """Architecture name per run, qualified by the run name when an architecture repeats."""
    counts = Counter(report.architecture for _, report in runs)
    return [
        report.architecture if counts[report.architecture] == 1 else f"{report.architecture} ({name})"
        for name, report in runs
    ]


def comparison_table(runs: Sequence[Run]) -> pd.DataFrame:
    """One row per run: architecture, peak memory, training seconds, accuracy."""
    rows = [
        [label, round(report.peak_memory_mb, 1), round(report.train_seconds, 1), round(100 * report.accuracy, 2)]
        for label, (_, report) in zip(run_labels(runs), runs)
    ]
    return pd.DataFrame(rows, columns=COMPARISON_COLUMNS)


def per_class_f1_table(runs: Sequence[Run]) -> pd.DataFrame:
    """Rows are classes, columns are runs."""
    frame = pd.DataFrame({"Class": class_names()})
    for label, (_, report) in zip(run_labels(runs), runs):
        frame[label] = [round(metrics.f1, 4) for metrics in report.per_class]
    return frame


def render(frame: pd.DataFrame) -> str:
    return frame.to_string(index=False) + "\n"


def format_eval_report(report: EvalReport) -> str:
    per_class = pd.DataFrame(
        [[m.label, m.precision, m.recall, m.f1, m.support] for m in report.per_class],
        columns=["Class", "Precision", "Recall", "F1", "Support"],
    ).round(4)
    averages = pd.DataFrame(
        [
            ["macro", report.macro.precision, report.macro.recall, report.macro.f1],
            ["weighted", report.weighted.precision, report.weighted.recall, report.weighted.f1],
        ],
        columns=["Average", "Precision", "Recall", "F1"],
    ).round(4)
    confusion = pd.DataFrame(report.confusion, index=class_names(), columns=range(len(report.confusion)))

    lines = [
        f"Architecture: {report.architecture}",
        f"Accuracy: {report.accuracy:.4f} ({report.total} test samples)",
        f"Training time (s): {report.train_seconds:.1f}",
        f"Peak memory (MB): {report.peak_memory_mb:.1f}",
    ]
    if report.baseline_accuracy is not None:
        lines.append(f"TF-IDF centroid baseline accuracy: {report.baseline_accuracy:.4f}")
    if report.empty_after_preprocessing:
        lines.append(f"Test texts empty after preprocessing: {report.empty_after_preprocessing}")
    lines += ["", render(per_class), render(averages)]
    if report.zero_support_classes:
        lines.append(f"Excluded from macro average (no test samples): {', '.join(report.zero_support_classes)}\n")
    if report.binary is not None:
        lines.append(
            f"Hateful vs. not hateful: accuracy {report.binary.accuracy:.4f}, precision {report.binary.precision:.4f}, "
            f"recall {report.binary.recall:.4f}, F1 {report.binary.f1:.4f}\n"
        )
    lines += ["Confusion matrix (rows gold, columns predicted):", confusion.to_string()]
    return "\n".join(lines) + "\n"
