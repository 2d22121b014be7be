# app/infrastructure/reporting/svg_chart.py
"""Static SVG line charts of training histories, drawn with matplotlib."""
import io
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from app.domain.entities.model_spec import EpochRecord  # noqa: E402

FIGSIZE = (6.4, 4.0)
METRICS = {
    "acc": ("train_acc", "val_acc", "accuracy"),
    "loss": ("train_loss", "val_loss", "loss"),
}
SERIES = (("train", "tab:blue"), ("validation", "tab:orange"))
RC = {
    "font.family": "DejaVu Sans",
    "axes.unicode_minus": False,
    # keep titles and labels as <text> and make element ids reproducible
    "svg.fonttype": "none",
    "svg.hashsalt": "training-history",
}


def history_figure(records: Sequence[EpochRecord], metric: str = "acc", title: str = "") -> Figure:
    """Train and validation series over epochs, one marker per epoch. Caller closes the figure."""
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {sorted(METRICS)}, got {metric!r}")
    train_field, val_field, metric_name = METRICS[metric]
    epochs = [record.epoch for record in records]

    fig, ax = plt.subplots(figsize=FIGSIZE, constrained_layout=True)
    for (label, color), field in zip(SERIES, (train_field, val_field)):
        (line,) = ax.plot(epochs, [getattr(record, field) for record in records],
                          marker="o", markersize=3, color=color, label=label)
        line.set_gid(label)
    if metric == "acc":
        ax.set_ylim(0.0, 1.0)
    ax.set_title(title or f"Train and validation {metric_name}")
    ax.set_xlabel("epoch")
    ax.set_ylabel(metric_name)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best")
    return fig


def history_chart(records: Sequence[EpochRecord], metric: str = "acc", title: str = "") -> str:
    """The history figure rendered as an SVG document."""
    with matplotlib.rc_context(RC):
        fig = history_figure(records, metric, title)
        try:
            buffer = io.StringIO()
            fig.savefig(buffer, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buffer.getvalue()
