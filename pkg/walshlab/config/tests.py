import importlib
import json
import logging
import os
import tempfile
from pathlib import Path
from unittest import TestCase, mock

from walshlab.config import settings
from walshlab.config.logging_handlers import DailyRotatingFileHandler
from walshlab.config.utils.logging import as_log_field, configure_logging
from walshlab.config.utils.utils import (
    format_number,
    is_power_of_two,
    parse_bool,
    parse_count,
    parse_int_list,
)


class UtilsTests(TestCase):
    def test_parse_bool(self):
        for value in ('true', ' Yes ', '1', 'TRUE'):
            self.assertTrue(parse_bool(value))
        for value in ('false', '0', '', 'no'):
            self.assertFalse(parse_bool(value))

    def test_parse_count(self):
        self.assertEqual(parse_count(' 3 ', 8), 3)
        self.assertEqual(parse_count('0', 8), 1)
        for value in (None, '', 'abc', '2.5'):
            self.assertEqual(parse_count(value, 8), 8)

    def test_malformed_thread_count_falls_back(self):
        self.addCleanup(importlib.reload, settings)
        with mock.patch.dict(os.environ, {'WALSHLAB_THREADS': 'abc'}):
            reloaded = importlib.reload(settings)
        self.assertEqual(reloaded.THREADS, max(1, os.cpu_count() or 1))

    def test_parse_int_list(self):
        self.assertEqual(parse_int_list('16, 64,256'), [16, 64, 256])
        for value in ('1,,2', '', 'a'):
            with self.assertRaises(ValueError):
                parse_int_list(value)

    def test_is_power_of_two(self):
        self.assertEqual([n for n in range(-2, 18) if is_power_of_two(n)], [1, 2, 4, 8, 16])

    def test_format_number(self):
        self.assertEqual(format_number(2.0), '2')
        self.assertEqual(format_number(0.1), '0.1')
        self.assertEqual(format_number(1e20), '1e+20')
        self.assertEqual(float(format_number(1 / 3)), 1 / 3)


class LoggingTests(TestCase):
    def test_as_log_field(self):
        self.assertEqual(as_log_field({'b': Path('x'), 'a': 1}), '{"a": 1, "b": "x"}')

    def test_configure_logging_with_json_formatter(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'out.log'
            configure_logging({
                'version': 1,
                'disable_existing_loggers': False,
                'formatters': {'json': {'()': 'pythonjsonlogger.json.JsonFormatter'}},
                'handlers': {'file': {'class': 'logging.FileHandler', 'filename': str(path),
                                      'formatter': 'json'}},
                'loggers': {'walshlab.test': {'handlers': ['file'], 'level': 'INFO',
                                              'propagate': False}},
            })
            logger = logging.getLogger('walshlab.test')
            logger.info("Sweep done", extra={'resolution': 4})
            for handler in logger.handlers:
                handler.close()
            logger.handlers.clear()
            record = json.loads(path.read_text().splitlines()[0])
        self.assertEqual(record['message'], "Sweep done")
        self.assertEqual(record['resolution'], 4)


class DailyRotatingFileHandlerTests(TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.log_dir = Path(self._tmp.name)

    def make_handler(self, **kwargs) -> DailyRotatingFileHandler:
        handler = DailyRotatingFileHandler('experiments.log', log_dir=self.log_dir, **kwargs)
        handler.setFormatter(logging.Formatter('%(message)s'))
        self.addCleanup(handler.close)
        return handler

    @staticmethod
    def record(message: str) -> logging.LogRecord:
        return logging.LogRecord('experiments', logging.INFO, __file__, 1, message, None, None)

    def test_writes_into_date_folder(self):
        handler = self.make_handler()
        handler.emit(self.record("first"))
        handler.flush()
        folder = self.log_dir / handler._today()
        self.assertEqual((folder / 'experiments.log').read_text(), "first\n")

    def test_rotates_by_size(self):
        handler = self.make_handler(maxBytes=16, backupCount=2)
        for index in range(4):
            handler.emit(self.record(f"message {index:04d}"))
        handler.flush()
        folder = self.log_dir / handler._today()
        self.assertTrue((folder / 'experiments.log.1').exists())
        self.assertTrue((folder / 'experiments.log.2').exists())
        self.assertFalse((folder / 'experiments.log.3').exists())

    def test_switches_folder_on_new_day(self):
        handler = self.make_handler()
        handler.emit(self.record("today"))
        with mock.patch.object(DailyRotatingFileHandler, '_today', return_value='2999-01-01'):
            handler.emit(self.record("tomorrow"))
        handler.flush()
        self.assertEqual((self.log_dir / '2999-01-01' / 'experiments.log').read_text(), "tomorrow\n")

    def test_removes_old_folders(self):
        old = self.log_dir / '2000-01-01'
        old.mkdir()
        (self.log_dir / 'not-a-date').mkdir()
        self.make_handler(max_days=7)
        self.assertFalse(old.exists())
        self.assertTrue((self.log_dir / 'not-a-date').exists())
