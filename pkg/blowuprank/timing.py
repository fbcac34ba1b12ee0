"""Timing utilities."""

import time
from dataclasses import dataclass, field
from typing import Any, Optional, Protocol


class LoggerProtocol(Protocol):
    """Logger protocol."""

    def debug(self, event: str, **kwargs: Any) -> Any:
        """Log a debug event."""
        ...


@dataclass
class Timer:
    """Timer context manager.

    Reports elapsed wall-clock time in whole milliseconds, the unit every
    report carries in ``elapsed_ms``.
    """

    name: str
    logger: Optional[LoggerProtocol] = None
    _start: float = field(default=0.0, init=False, repr=False)
    _end: Optional[float] = field(default=None, init=False, repr=False)

    def __enter__(self) -> "Timer":
        """Enter context."""
        self._start = time.perf_counter()
        self._end = None
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        """Exit context."""
        self._end = time.perf_counter()
        if self.logger:
            self.logger.debug(
                "timer_stopped", timer=self.name, elapsed_ms=self.elapsed_ms
            )

    @property
    def elapsed_ms(self) -> int:
        end = self._end if self._end is not None else time.perf_counter()
        return int(round((end - self._start) * 1000))


__all__ = ["LoggerProtocol", "Timer"]
