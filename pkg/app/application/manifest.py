# app/application/manifest.py
import hashlib
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

from app.config.settings import settings
from app.domain.entities.model_spec import RunManifest
from app.infrastructure.persistence.artifact_writer import write_manifest

MANIFEST_FILE = "manifest.json"


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class ManifestRecorder:
    """Collects inputs and outputs of one command and writes its manifest."""

    def __init__(self, command: str, config: Optional[dict] = None, seed: Optional[int] = None):
        self.command = command
        self.config = config or {}
        self.seed = seed
        self.started_at = _now()
        self.inputs: dict = {}
        self.outputs: List[str] = []

    def add_input(self, path: Optional[Path]):
        if path is not None:
            self.inputs[str(path)] = file_sha256(Path(path))

    def add_outputs(self, *paths: Path):
        self.outputs.extend(str(path) for path in paths)

    def write(self, path: Path) -> Path:
        manifest = RunManifest(
            command=self.command,
            config=self.config,
            seed=self.seed,
            input_hashes=dict(sorted(self.inputs.items())),
            output_paths=sorted(self.outputs),
            tool_version=settings.VERSION,
            started_at=self.started_at,
            finished_at=_now(),
        )
        return write_manifest(manifest, path)
