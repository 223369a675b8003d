import logging
import sys

from pythonjsonlogger import jsonlogger

_TEXT_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
_JSON_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def setup_logging(level: str = "INFO", json_format: bool = False) -> None:
    """
    Configure the root logger once for CLI and API processes.

    Parameters:
    - level: logging level name
    - json_format: emit one JSON object per record instead of plain text

    Records always go to stderr; stdout is reserved for JSON documents.
    """
    handler = logging.StreamHandler(sys.stderr)
    if json_format:
        handler.setFormatter(jsonlogger.JsonFormatter(_JSON_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(_TEXT_FORMAT))

    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))
