"""Logging module."""

import logging
import sys
from typing import Any

import structlog


def _stderr_logger(*args: Any) -> structlog.PrintLogger:
    # sys.stderr is resolved per call, not at configuration time
    return structlog.PrintLogger(sys.stderr)


def configure_logging(level: str = "WARNING", json_output: bool = False) -> None:
    """Configure structured logging.

    Output goes to standard error; standard output is reserved for reports.

    Args:
        level: Log level name
        json_output: Render events as JSON lines instead of key/value text
    """
    renderer: Any
    if json_output:
        renderer = structlog.processors.JSONRenderer(sort_keys=True)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelName(level.upper())
        ),
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=False,
    )


def ensure_default_logging() -> None:
    """Send warnings to standard error unless logging is already configured."""
    if not structlog.is_configured():
        configure_logging()


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Get logger by name.

    Args:
        name: Logger name

    Returns:
        Bound logger instance, resolved against the current configuration
        on first use
    """
    logger: structlog.stdlib.BoundLogger = structlog.get_logger(
        name, logger_name=name
    )
    return logger


def get_module_logger(module_name: str) -> structlog.stdlib.BoundLogger:
    """Get logger for module.

    Args:
        module_name: Module name

    Returns:
        Bound logger instance
    """
    return get_logger(module_name)


class LoggerMixin:
    """Gives a class a logger bound to its class name."""

    @property
    def logger(self) -> structlog.stdlib.BoundLogger:
        """Get logger.

        Returns:
            Bound logger instance
        """
        logger = self.__dict__.get("_logger")
        if logger is None:
            logger = get_logger(self.__class__.__name__)
            self.__dict__["_logger"] = logger
        return logger

    def debug(self, event: str, **kwargs: Any) -> None:
        """Log debug event.

        Args:
            event: Event name
            **kwargs: Event fields
        """
        self.logger.debug(event, **kwargs)

    def info(self, event: str, **kwargs: Any) -> None:
        """Log info event.

        Args:
            event: Event name
            **kwargs: Event fields
        """
        self.logger.info(event, **kwargs)


ensure_default_logging()


__all__ = [
    "LoggerMixin",
    "configure_logging",
    "ensure_default_logging",
    "get_logger",
    "get_module_logger",
]
