"""
Command handlers for comparison reports and history charts
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List

from app.application.command_handlers.model_command_handlers import HISTORY_FILE, REPORT_JSON_FILE
from app.application.commands.classifier_commands import ExportPlotsCommand, ReportCommand
from app.application.manifest import MANIFEST_FILE, ManifestRecorder
from app.config.logging_config import logger
from app.config.settings import settings
from app.infrastructure.persistence.artifact_writer import read_history_csv, read_report_json, write_text
from app.infrastructure.reporting.svg_chart import history_chart
from app.infrastructure.reporting.tables import comparison_table, per_class_f1_table, render

COMPARISON_FILE = "comparison.txt"


@dataclass(frozen=True)
class ReportResult:
    text: str
    outputs: List[Path] = field(default_factory=list)


class ReportCommandHandler:
    """Command handler for report and export-plots"""

    def handle_report(self, command: ReportCommand) -> ReportResult:
        """Handle report command: comparison table plus per-class F1 across runs"""
        runs = []
        for run_dir in command.run_dirs:
            run_dir = Path(run_dir)
            runs.append((run_dir.name, read_report_json(run_dir / REPORT_JSON_FILE)))

        text = "\n".join([
            render(comparison_table(runs)),
            "Per-class F1",
            render(per_class_f1_table(runs)),
        ])
        if command.out_dir is None:
            return ReportResult(text=text)

        out_dir = settings.resolve_output(command.out_dir)
        recorder = ManifestRecorder("report", {"run_dirs": [str(d) for d in command.run_dirs], "svg": command.svg})
        outputs = [write_text(text, out_dir / COMPARISON_FILE)]
        if command.svg:
            for run_dir in map(Path, command.run_dirs):
                records = read_history_csv(run_dir / HISTORY_FILE)
                title = f"{run_dir.name}: train and validation accuracy"
                outputs.append(write_text(history_chart(records, "acc", title), out_dir / f"{run_dir.name}_history.svg"))
        recorder.add_outputs(*outputs)
        recorder.write(out_dir / MANIFEST_FILE)
        logger.info(f"[REPORT] Compared {len(runs)} runs; {len(outputs)} files written to {out_dir}")
        return ReportResult(text=text, outputs=outputs)

    def handle_export_plots(self, command: ExportPlotsCommand) -> Dict[str, Path]:
        """Handle export-plots command"""
        recorder = ManifestRecorder("export-plots", {"metric": command.metric})
        records = read_history_csv(command.history)
        recorder.add_input(command.history)
        out_dir = settings.resolve_output(command.out_dir)
        chart = write_text(history_chart(records, command.metric), out_dir / "history.svg")
        recorder.add_outputs(chart)
        manifest = recorder.write(out_dir / MANIFEST_FILE)
        logger.info(f"[REPORT] {len(records)} epochs plotted to {chart}")
        return {"chart": chart, "manifest": manifest}
