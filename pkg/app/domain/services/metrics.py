# app/domain/services/metrics.py
from typing import Sequence

import numpy as np

from app.domain.entities.labels import ClassLabel, HATEFUL_CLASSES, N_CLASSES
from app.domain.entities.model_spec import AveragedMetrics, BinaryReport, ClassMetrics, EvalReport


def confusion_matrix(gold: Sequence[int], predicted: Sequence[int], n_classes: int = N_CLASSES) -> np.ndarray:
    """Rows are gold classes, columns are predictions."""
    matrix = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(matrix, (np.asarray(gold, dtype=np.int64), np.asarray(predicted, dtype=np.int64)), 1)
    return matrix


def _safe_ratio(numerator: float, denominator: float) -> float:
    return float(numerator / denominator) if denominator > 0 else 0.0


def _f1(precision: float, recall: float) -> float:
    return _safe_ratio(2 * precision * recall, precision + recall)


def _binary_view(matrix: np.ndarray) -> BinaryReport:
    hateful = np.array([ClassLabel(i) in HATEFUL_CLASSES for i in range(matrix.shape[0])])
    # index 0 = hateful, 1 = not hateful
    collapsed = np.array([
        [matrix[np.ix_(hateful, hateful)].sum(), matrix[np.ix_(hateful, ~hateful)].sum()],
        [matrix[np.ix_(~hateful, hateful)].sum(), matrix[np.ix_(~hateful, ~hateful)].sum()],
    ])
    precision = _safe_ratio(collapsed[0, 0], collapsed[:, 0].sum())
    recall = _safe_ratio(collapsed[0, 0], collapsed[0, :].sum())
    return BinaryReport(
        accuracy=_safe_ratio(np.trace(collapsed), collapsed.sum()),
        precision=precision,
        recall=recall,
        f1=_f1(precision, recall),
        confusion=collapsed.tolist(),
    )


def compute_report(gold: Sequence[int], predicted: Sequence[int], architecture: str = "") -> EvalReport:
    """
    Accuracy, per-class / macro / weighted precision-recall-F1 and the confusion matrix.

    Precision of a class that is never predicted is 0. Classes without gold
    support are listed in zero_support_classes and left out of the macro mean.
    """
    if len(gold) != len(predicted):
        raise ValueError(f"gold and predicted lengths differ: {len(gold)} != {len(predicted)}")
    matrix = confusion_matrix(gold, predicted)
    support = matrix.sum(axis=1)
    predicted_totals = matrix.sum(axis=0)
    diagonal = np.diag(matrix)

    per_class = []
    for label in ClassLabel:
        precision = _safe_ratio(diagonal[label], predicted_totals[label])
        recall = _safe_ratio(diagonal[label], support[label])
        per_class.append(ClassMetrics(
            label=label.display_name,
            precision=precision,
            recall=recall,
            f1=_f1(precision, recall),
            support=int(support[label]),
        ))

    present = [metrics for metrics in per_class if metrics.support > 0]
    total = int(support.sum())
    macro = AveragedMetrics(
        precision=float(np.mean([m.precision for m in present])) if present else 0.0,
        recall=float(np.mean([m.recall for m in present])) if present else 0.0,
        f1=float(np.mean([m.f1 for m in present])) if present else 0.0,
    )
    weighted = AveragedMetrics(
        precision=_safe_ratio(sum(m.precision * m.support for m in per_class), total),
        recall=_safe_ratio(sum(m.recall * m.support for m in per_class), total),
        f1=_safe_ratio(sum(m.f1 * m.support for m in per_class), total),
    )
    return EvalReport(
        architecture=architecture,
        accuracy=_safe_ratio(np.trace(matrix), total),
        per_class=per_class,
        macro=macro,
        weighted=weighted,
        confusion=matrix.tolist(),
        zero_support_classes=[m.label for m in per_class if m.support == 0],
        binary=_binary_view(matrix),
    )
