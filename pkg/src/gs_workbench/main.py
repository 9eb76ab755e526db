"""Entry point for the gs-workbench command line."""

import logging
import os
import sys
from collections.abc import Sequence

import structlog

from gs_workbench.cli import run_cli


def configure_logging(level: str = "WARNING") -> None:
    """JSON log lines on stderr; stdout is reserved for reports."""
    logging.basicConfig(stream=sys.stderr, format="%(message)s",
                        level=getattr(logging, level.upper(), logging.WARNING), force=True)
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def main(argv: Sequence[str] | None = None) -> int:
    configure_logging(os.environ.get("LOG_LEVEL", "WARNING"))
    return run_cli(argv)


if __name__ == "__main__":
    sys.exit(main())
