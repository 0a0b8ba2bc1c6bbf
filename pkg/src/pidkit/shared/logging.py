"""Structured logging configuration using structlog."""

import logging
import sys
from typing import Any

import structlog


class _StderrWriter:
    """File-like shim that resolves ``sys.stderr`` on every write.

    Reports are written to stdout, so log lines must never land there. Resolving the stream
    lazily keeps loggers valid when stderr is swapped (CLI test runners do this).
    """

    def write(self, message: str) -> int:
        return sys.stderr.write(message)

    def flush(self) -> None:
        sys.stderr.flush()


def configure_logging(log_level: str = "INFO", json_output: bool = False) -> None:
    """Configure structlog for the toolkit.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
        json_output: If True, output JSON format; otherwise human-readable
    """
    level = getattr(logging, log_level.upper())

    # Common processors
    shared_processors: list[structlog.types.Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.UnicodeDecoder(),
    ]

    if json_output:
        processors = [
            *shared_processors,
            structlog.processors.format_exc_info,
            structlog.processors.JSONRenderer(),
        ]
    else:
        processors = [
            *shared_processors,
            structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty()),
        ]

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=structlog.PrintLoggerFactory(file=_StderrWriter()),  # type: ignore[arg-type]
        cache_logger_on_first_use=False,
    )


def get_logger(name: str | None = None) -> Any:
    """Get a configured logger instance.

    Args:
        name: Optional logger name for identification

    Returns:
        A bound logger instance
    """
    return structlog.get_logger(name)


def bind_frame_id(frame_id: str) -> None:
    """Bind a frame ID to the current context.

    Args:
        frame_id: The frame being processed
    """
    structlog.contextvars.bind_contextvars(frame_id=frame_id)


def clear_context() -> None:
    """Clear all context variables."""
    structlog.contextvars.clear_contextvars()
