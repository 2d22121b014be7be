# app/config/settings.py
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


class Settings:
    PROJECT_NAME: str = "Bangla Hate Speech Classifier"
    VERSION: str = "0.3.0"
    DEBUG: bool = os.getenv("DEBUG", "False").lower() == "true"

    # Relative --out directories resolve under this root.
    OUTPUT_ROOT: str = os.getenv("BHS_OUTPUT_ROOT", ".")
    # Log files are written only when a cache root is configured.
    CACHE_ROOT: Optional[str] = os.getenv("BHS_CACHE_ROOT") or None

    # Forward ops raise on NaN/Inf with the op name when enabled.
    CHECKED_MODE: bool = True

    RESOURCES_DIR: Path = Path(__file__).resolve().parent.parent / "resources"

    @property
    def LOG_DIR(self) -> Optional[Path]:
        if self.CACHE_ROOT is None:
            return None
        return Path(self.CACHE_ROOT) / "logs"

    def resolve_output(self, path: str | os.PathLike) -> Path:
        """Resolve an output path against OUTPUT_ROOT unless it is absolute."""
        candidate = Path(path)
        if candidate.is_absolute():
            return candidate
        return Path(self.OUTPUT_ROOT) / candidate


settings = Settings()
