import os

from pathlib import Path

from dotenv import load_dotenv

from walshlab.config.utils.utils import parse_bool, parse_count

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent

DEBUG = parse_bool(os.getenv("WALSHLAB_DEBUG", "False"))

# runtime
THREADS = parse_count(os.getenv("WALSHLAB_THREADS"), os.cpu_count() or 1)
OUTDIR = Path(os.getenv("WALSHLAB_OUTDIR", "reports"))
STAMP_REPORTS = parse_bool(os.getenv("WALSHLAB_STAMP_REPORTS", "False"))

# numerical limits
MAX_RESOLUTION = 30
DEFAULT_RESOLUTION = 6
STREAMING_RESOLUTION = 9
SCHIPP_MAX_N = 12
DIRICHLET_MAX_N = 20
RATIONAL_MAX_RESOLUTION = 3

# tolerances
DECOMPOSITION_TOLERANCE = 1e-9
DUALITY_TOLERANCE = 1e-10
PARSEVAL_TOLERANCE = 1e-10

# experiments
FLOAT_FORMAT = '%.17g'
LAMBDA_GRID_POINTS = 32
LAMBDA_GRID_SPAN = (0.01, 100.0)
STRONG_MEANS_DEFAULT_N = [1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024]

# logging
LOG_LEVEL = os.getenv("WALSHLAB_LOG_LEVEL", "INFO").upper()
LOG_TO_FILE = parse_bool(os.getenv("WALSHLAB_LOG_FILE", "False"))
LOG_DIR = Path(os.getenv("WALSHLAB_LOG_DIR", "logs"))

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
        'json': {
            '()': 'pythonjsonlogger.json.JsonFormatter',
            'format': '%(asctime)s %(levelname)s %(name)s %(message)s',
        },
    },

    'handlers': {
        'console': {
            'level': 'DEBUG' if DEBUG else LOG_LEVEL,
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'simple',
        },
    },

    'loggers': {
        'walshlab': {
            'handlers': ['console'],
            'level': 'DEBUG' if DEBUG else LOG_LEVEL,
            'propagate': False,
        },

        'experiments': {
            'handlers': ['console', 'file'] if LOG_TO_FILE else ['console'],
            'level': 'INFO',
            'propagate': False,
        },
    }
}

if LOG_TO_FILE:
    LOGGING['handlers']['file'] = {
        'level': 'INFO',
        'class': 'walshlab.config.logging_handlers.DailyRotatingFileHandler',
        'filename': 'experiments.log',
        'log_dir': str(LOG_DIR),
        'maxBytes': 10 * 1024 * 1024,
        'backupCount': 5,
        'formatter': 'json',
        'encoding': 'utf-8',
    }
