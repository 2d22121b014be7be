import logging
import sys
from logging.handlers import RotatingFileHandler
from app.config.settings import settings

def setup_logging():
    """Configure logging for the application."""
    logger = logging.getLogger("app")
    logger.setLevel(logging.DEBUG if settings.DEBUG else logging.INFO)
    if logger.handlers:
        return logger

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    # stdout carries command results (predictions, tables), so logs go to stderr
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_dir = settings.LOG_DIR
    if log_dir is not None:
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            log_dir / "app.log",
            maxBytes=10485760,  # 10MB
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger

def sanitize_log_message(message: str, encoding: str | None = None) -> str:
    """
    Replace characters the console encoding cannot represent with [U+XXXX].

    Comments carry Bangla script and emoji; a cp1252 console would otherwise
    raise UnicodeEncodeError in the middle of a training run.
    """
    encoding = encoding or getattr(sys.stderr, "encoding", None) or "utf-8"
    if encoding.lower().replace("-", "") in ("utf8", "utf16", "utf32"):
        return message
    chars = []
    for char in message:
        try:
            char.encode(encoding)
            chars.append(char)
        except (UnicodeEncodeError, LookupError):
            chars.append(f"[U+{ord(char):04X}]")
    return "".join(chars)

class UnicodeCompatibleLogger:
    """
    A wrapper around the logger that sanitizes Unicode characters
    to prevent encoding errors on consoles without UTF-8 support.
    """
    def __init__(self, logger):
        self._logger = logger

    def info(self, message, *args, **kwargs):
        self._logger.info(sanitize_log_message(str(message)), *args, **kwargs)

    def warning(self, message, *args, **kwargs):
        self._logger.warning(sanitize_log_message(str(message)), *args, **kwargs)

    def error(self, message, *args, **kwargs):
        self._logger.error(sanitize_log_message(str(message)), *args, **kwargs)

    def debug(self, message, *args, **kwargs):
        self._logger.debug(sanitize_log_message(str(message)), *args, **kwargs)

    def critical(self, message, *args, **kwargs):
        self._logger.critical(sanitize_log_message(str(message)), *args, **kwargs)

# Create and configure the logger
_base_logger = setup_logging()
logger = UnicodeCompatibleLogger(_base_logger)
