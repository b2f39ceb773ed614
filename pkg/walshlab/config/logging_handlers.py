import shutil
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path

DATE_FORMAT = "%Y-%m-%d"


class DailyRotatingFileHandler(RotatingFileHandler):
    """
    Size-rotating file handler that keeps one folder per day.

    Records go to ``<log_dir>/<YYYY-MM-DD>/<filename>``. A new folder is opened on the first
    record after midnight and folders older than ``max_days`` are removed.
    """

    def __init__(self, filename, log_dir='logs', maxBytes=10 * 1024 * 1024, backupCount=0,
                 encoding=None, delay=False, max_days=7):
        self._log_dir = Path(log_dir)
        self._date_folder = self._today()
        self._base_filename = filename
        self.max_days = max_days
        self._ensure_date_folder_exists()

        super().__init__(
            filename=str(self._get_logs_folder() / filename),
            maxBytes=maxBytes,
            backupCount=backupCount,
            encoding=encoding,
            delay=delay
        )
        self._clean_old_logs()

    @staticmethod
    def _today() -> str:
        return datetime.now().strftime(DATE_FORMAT)

    def _clean_old_logs(self):
        now = datetime.now()

        for folder in self._get_all_log_folders():
            try:
                folder_datetime = datetime.strptime(folder.name, DATE_FORMAT)
                if (now - folder_datetime).days > self.max_days:
                    shutil.rmtree(folder)
            except (ValueError, OSError):
                continue

    def _get_all_log_folders(self) -> list[Path]:
        return [path for path in self._log_dir.iterdir() if path.is_dir()]

    def _get_logs_folder(self) -> Path:
        return self._log_dir / self._date_folder

    def _ensure_date_folder_exists(self):
        self._get_logs_folder().mkdir(parents=True, exist_ok=True)

    def shouldRollover(self, record):
        if self.stream is None:
            self.stream = self._open()

        if self.maxBytes > 0:
            msg = "%s\n" % self.format(record)
            self.stream.seek(0, 2)
            if self.stream.tell() + len(msg) >= self.maxBytes:
                return 1
        if self._today() != self._date_folder:
            return 2

        return 0

    def doRollover(self):
        if self.stream:
            self.stream.close()
            self.stream = None

        current_date = self._today()
        if current_date != self._date_folder:
            self._date_folder = current_date
            self._ensure_date_folder_exists()
            self.baseFilename = str(self._get_logs_folder() / self._base_filename)
            self._clean_old_logs()
        elif self.backupCount > 0:
            for i in range(self.backupCount - 1, 0, -1):
                source = Path(f"{self.baseFilename}.{i}")
                target = Path(f"{self.baseFilename}.{i + 1}")
                if source.exists():
                    source.replace(target)

            current = Path(self.baseFilename)
            if current.exists():
                current.replace(f"{self.baseFilename}.1")

        self.stream = self._open()
