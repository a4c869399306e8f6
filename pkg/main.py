"""
lpsolve - command line entry point
"""
import logging
import sys

from lpsolve.cli import main
from lpsolve.config import settings

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr,
)


if __name__ == "__main__":
    sys.exit(main())
