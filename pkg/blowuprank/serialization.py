"""Serialization protocol and report envelopes."""

from typing import Any, Dict, Optional, Protocol, runtime_checkable

from blowuprank.core import SerializationError
from blowuprank.gf import FieldSpec

TOOL_NAME = "blowup-rank"


@runtime_checkable
class Serializable(Protocol):
    """Objects with a JSON-compatible dictionary form."""

    def serialize(self) -> Dict[str, Any]:
        """Serialize object.

        Returns:
            JSON-compatible dictionary
        """
        ...


def serialize(obj: Serializable) -> Dict[str, Any]:
    """Serialize an object, wrapping failures.

    Raises:
        SerializationError: If the object cannot be serialized
    """
    if not isinstance(obj, Serializable):
        raise SerializationError(
            "Object is not serializable", {"object_type": type(obj).__name__}
        )
    try:
        return obj.serialize()
    except SerializationError:
        raise
    except Exception as e:
        raise SerializationError(
            "Failed to serialize object", {"object_type": type(obj).__name__}, e
        ) from e


def tool_info() -> Dict[str, str]:
    from blowuprank import __version__

    return {"name": TOOL_NAME, "version": __version__}


def report(
    kind: str,
    body: Dict[str, Any],
    field: Optional[FieldSpec] = None,
    parameters: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Wrap a report body with the tool, field and run parameters.

    Args:
        kind: Report type, e.g. ``certificate``
        body: Serialized result
        field: Field of the instance
        parameters: Arguments needed to reproduce the run

    Returns:
        Report dictionary
    """
    payload: Dict[str, Any] = {"tool": tool_info(), "report": kind}
    if field is not None:
        payload["field"] = field.serialize()
    if parameters is not None:
        payload["parameters"] = parameters
    payload.update(body)
    return payload


__all__ = ["Serializable", "TOOL_NAME", "report", "serialize", "tool_info"]
