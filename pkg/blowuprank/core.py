"""Core error hierarchy."""

from typing import Any, Dict, Optional


class BlowupError(Exception):
    """Base class for all blowuprank errors."""

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None,
    ) -> None:
        """Initialize error.

        Args:
            message: Error message.
            details: Error details.
            cause: Original exception that caused this error.
        """
        super().__init__(message)
        self.details = details or {}
        if cause:
            self.__cause__ = cause
            self.__traceback__ = cause.__traceback__


class FieldError(BlowupError):
    """Invalid field parameters or field arithmetic error."""


class MatrixError(BlowupError):
    """Shape, field or block-structure mismatch."""


class ParseError(BlowupError):
    """Polynomial syntax error."""

    def __init__(
        self,
        message: str,
        position: int,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(
            f"{message} at position {position}",
            {"position": position, **(details or {})},
        )
        self.position = position


class CapExceededError(BlowupError):
    """An exhaustive search would exceed the configured tuple cap."""

    def __init__(
        self,
        message: str,
        estimate: int,
        cap: int,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(
            message,
            {"tuples": estimate, "cap": cap, **(details or {})},
        )
        self.estimate = estimate
        self.cap = cap


class HigmanError(BlowupError):
    """Linearization or block reduction error."""


class ConstructionError(BlowupError):
    """A counterexample constructor precondition does not hold."""


class ConfigError(BlowupError):
    """Configuration error."""


class SerializationError(BlowupError):
    """Serialization error."""


class SpaceFileError(BlowupError):
    """Space or report file cannot be read or written."""


def get_error_context(error: Exception) -> Dict[str, Any]:
    """Get error context.

    Args:
        error: Exception to get context from.

    Returns:
        Error context.
    """
    if isinstance(error, BlowupError):
        return error.details
    return {}


def format_error_context(context: Dict[str, Any]) -> str:
    """Format error context.

    Args:
        context: Error context.

    Returns:
        Formatted error context.
    """
    if not context:
        return ""
    return "\n".join(f"{key}: {value}" for key, value in context.items())


def format_exception(error: Exception) -> str:
    """Format exception.

    Args:
        error: Exception to format.

    Returns:
        Formatted exception.
    """
    message = str(error)
    context = get_error_context(error)
    if context:
        context_str = format_error_context(context)
        return f"{message}\nContext:\n{context_str}"
    return message


__all__ = [
    "BlowupError",
    "CapExceededError",
    "ConfigError",
    "ConstructionError",
    "FieldError",
    "HigmanError",
    "MatrixError",
    "ParseError",
    "SerializationError",
    "SpaceFileError",
    "format_error_context",
    "format_exception",
    "get_error_context",
]
