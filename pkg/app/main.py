"""
Command-line entry point for Proxima
"""

import logging
import sys
from typing import List, Optional

from app.cli.commands import run_command
from app.utils.config import settings

logger = logging.getLogger(__name__)


def configure_logging(level: Optional[str] = None) -> None:
    """Log to stderr so reports on stdout stay machine-diffable."""
    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging("DEBUG" if settings.debug else None)
    code, text = run_command(sys.argv[1:] if argv is None else list(argv))

    stream = sys.stderr if code == 2 else sys.stdout
    if text:
        stream.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
