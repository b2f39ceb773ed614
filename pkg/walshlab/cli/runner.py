import logging
import time
from argparse import Namespace
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from walshlab.config.utils.logging import as_log_field

logger = logging.getLogger('experiments')

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


@dataclass
class CommandResult:
    exit_code: int = EXIT_OK
    files: list[Path] = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def config_echo(args: Namespace) -> dict:
    return {key: value for key, value in vars(args).items() if not callable(value)}


class ExperimentLoggingRunner:
    """Runs one command handler and logs a single structured record about it."""
    _SUCCESS_MESSAGE = 'Experiment finished'
    _CHECK_FAILED_MESSAGE = 'Experiment check failed'
    _FAIL_MESSAGE = 'Experiment failed'

    def __init__(self, handler: Callable[[Namespace], CommandResult]):
        self.handler = handler

    def __call__(self, command: str, args: Namespace) -> CommandResult:
        start_time = time.perf_counter()
        config = as_log_field(config_echo(args))

        try:
            result = self.handler(args)
        except Exception as e:
            logger.error(
                self._FAIL_MESSAGE,
                extra={
                    'command': command,
                    'config': config,
                    'duration_sec': time.perf_counter() - start_time,
                    'error': str(e),
                },
                exc_info=True,
            )
            raise

        logger.log(
            level=self._get_log_level(result.exit_code),
            msg=self._get_log_message(result.exit_code),
            extra={
                'command': command,
                'config': config,
                'duration_sec': time.perf_counter() - start_time,
                'exit_code': result.exit_code,
                'files': as_log_field([str(path) for path in result.files]),
                'summary': as_log_field(result.summary),
            },
        )
        return result

    @classmethod
    def _get_log_message(cls, exit_code: int) -> str:
        if exit_code == EXIT_OK:
            return cls._SUCCESS_MESSAGE
        return cls._CHECK_FAILED_MESSAGE

    @staticmethod
    def _get_log_level(exit_code: int) -> int:
        if exit_code == EXIT_OK:
            return logging.INFO
        return logging.WARNING
