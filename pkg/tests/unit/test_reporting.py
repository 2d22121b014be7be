import re
import xml.etree.ElementTree as ET

import matplotlib.pyplot as plt
import pytest

from app.domain.services.metrics import compute_report
from app.infrastructure.reporting.svg_chart import history_chart, history_figure
from app.infrastructure.reporting.tables import (
    COMPARISON_COLUMNS,
    comparison_table,
    format_eval_report,
    per_class_f1_table,
    render,
    run_labels,
)

SVG = "{http://www.w3.org/2000/svg}"


def _report(architecture, gold, predicted, **extra):
    return compute_report(gold, predicted, architecture=architecture).model_copy(update=extra)


@pytest.fixture
def runs():
    gold = [0, 1, 2, 3, 4, 5, 6, 0]
    return [
        ("runs/lstm", _report("lstm", gold, [0, 1, 2, 3, 4, 5, 6, 1], train_seconds=12.34, peak_memory_mb=101.26)),
        ("runs/gru", _report("gru", gold, gold, train_seconds=9.0, peak_memory_mb=99.0)),
        ("runs/attention", _report("attention", gold, [0] * 8, train_seconds=20.0, peak_memory_mb=120.0)),
    ]


# --- svg ---

@pytest.fixture
def history_figures():
    figures = []

    def build(*args, **kwargs):
        figures.append(history_figure(*args, **kwargs))
        return figures[-1]

    yield build
    for figure in figures:
        plt.close(figure)


@pytest.mark.parametrize("metric,field", [("acc", "train_acc"), ("loss", "train_loss")])
def test_history_figure_has_two_series_with_a_point_per_epoch(epoch_records, history_figures, metric, field):
    lines = history_figures(epoch_records, metric=metric, title="attention").axes[0].get_lines()
    assert [line.get_gid() for line in lines] == ["train", "validation"]
    for line in lines:
        assert list(line.get_xdata()) == list(range(1, 11))
    assert list(lines[0].get_ydata()) == [getattr(record, field) for record in epoch_records]


def test_history_figure_accuracy_axis_is_fixed(epoch_records, history_figures):
    assert history_figures(epoch_records, metric="acc").axes[0].get_ylim() == (0.0, 1.0)
    assert history_figures(epoch_records, metric="loss").axes[0].get_ylim() != (0.0, 1.0)


def test_history_chart_is_a_reproducible_svg_document(epoch_records):
    svg = history_chart(epoch_records, metric="acc")
    root = ET.fromstring(svg.encode("utf-8"))
    assert root.tag == f"{SVG}svg"
    assert {"train", "validation"} <= {group.get("id") for group in root.iter(f"{SVG}g")}
    assert "Train and validation accuracy" in svg
    assert history_chart(epoch_records, metric="acc") == svg


def test_history_chart_escapes_title_and_rejects_unknown_metric(epoch_records):
    assert "a &lt; b" in history_chart(epoch_records, title="a < b")
    with pytest.raises(ValueError):
        history_chart(epoch_records, metric="f1")


def test_history_figure_single_epoch(epoch_records, history_figures):
    lines = history_figures(epoch_records[:1]).axes[0].get_lines()
    assert [len(line.get_xdata()) for line in lines] == [1, 1]


# --- tables ---

def test_comparison_table_shape(runs):
    table = comparison_table(runs)
    assert list(table.columns) == COMPARISON_COLUMNS
    assert table["Architecture"].tolist() == ["lstm", "gru", "attention"]
    assert table["Accuracy (%)"].tolist() == [87.5, 100.0, 25.0]
    assert table["Memory usage (MB)"].tolist() == [101.3, 99.0, 120.0]


def test_per_class_f1_table_shape(runs):
    table = per_class_f1_table(runs)
    assert table.shape == (7, 4)
    assert table["Class"].tolist()[0] == "Hate Speech"
    assert table["gru"].tolist() == [1.0] * 7


def test_repeated_architectures_are_qualified(runs):
    doubled = runs + [("runs/gru-2", runs[1][1])]
    assert run_labels(doubled) == ["lstm", "gru (runs/gru)", "attention", "gru (runs/gru-2)"]


def test_render_ends_with_newline(runs):
    text = render(comparison_table(runs))
    assert text.endswith("\n")
    assert len(text.splitlines()) == 4


def test_format_eval_report_sections(runs):
    report = runs[0][1].model_copy(update={"baseline_accuracy": 0.5, "empty_after_preprocessing": 2})
    text = format_eval_report(report)
    assert text.startswith("Architecture: lstm\nAccuracy: 0.8750 (8 test samples)\n")
    assert "TF-IDF centroid baseline accuracy: 0.5000" in text
    assert "Test texts empty after preprocessing: 2" in text
    assert "Hateful vs. not hateful" in text
    assert re.search(r"Confusion matrix \(rows gold, columns predicted\):\n", text)
    assert "Excluded from macro average" not in text


def test_format_eval_report_lists_zero_support_classes():
    text = format_eval_report(compute_report([0, 0], [0, 1], architecture="gru"))
    assert "Excluded from macro average (no test samples): Aggressive Comment" in text
