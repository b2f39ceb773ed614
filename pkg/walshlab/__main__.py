import sys

from walshlab.cli.main import run
from walshlab.config.utils.logging import configure_logging


def main() -> int:
    configure_logging()
    return run()


if __name__ == '__main__':
    sys.exit(main())
