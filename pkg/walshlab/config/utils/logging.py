import json
import logging.config
from typing import Any, Mapping

from walshlab.config import settings


def configure_logging(config: Mapping[str, Any] | None = None) -> None:
    """Applies ``settings.LOGGING`` (or the given dict config). Called by the CLI entry point only."""
    logging.config.dictConfig(dict(config or settings.LOGGING))


def as_log_field(value: Any) -> str:
    """Serialises a config echo or result summary into a single JSON log field."""
    return json.dumps(value, ensure_ascii=False, default=str, sort_keys=True)
