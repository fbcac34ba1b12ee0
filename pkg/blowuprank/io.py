"""Reading space files and writing JSON reports."""

import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Protocol

from blowuprank.core import SerializationError, SpaceFileError
from blowuprank.pencil import LinearMatrix


class JsonReader(Protocol):
    """JSON reader protocol."""

    def read(self, path: Path) -> Dict[str, Any]:
        """Read a JSON object from path.

        Raises:
            SpaceFileError: If the file cannot be read or parsed
        """
        ...


class JsonFileReader:
    """Reads JSON objects from files."""

    def read(self, path: Path) -> Dict[str, Any]:
        try:
            content = path.read_text(encoding="utf-8")
        except OSError as e:
            raise SpaceFileError(
                f"Failed to read file {path}", {"path": str(path)}, e
            ) from e
        try:
            data = json.loads(content)
        except json.JSONDecodeError as e:
            raise SpaceFileError(
                f"Failed to parse JSON file {path}",
                {"path": str(path), "line": e.lineno},
                e,
            ) from e
        if not isinstance(data, dict):
            raise SpaceFileError(
                f"Expected a JSON object in {path}", {"path": str(path)}
            )
        return data


def dumps(payload: Dict[str, Any]) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    try:
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    except (TypeError, ValueError) as e:
        raise SerializationError("Payload is not JSON-compatible", cause=e) from e


def write_json(payload: Dict[str, Any], path: Optional[Path] = None) -> None:
    """Write payload to path, or to standard output when path is None.

    Raises:
        SpaceFileError: If the file cannot be written
    """
    text = dumps(payload)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise SpaceFileError(
            f"Failed to write file {path}", {"path": str(path)}, e
        ) from e


@dataclass(frozen=True)
class SpaceFile:
    """A linear matrix plus the instance it was built for, if recorded."""

    pencil: LinearMatrix
    instance: Optional[Any] = None

    def serialize(self) -> Dict[str, Any]:
        data = self.pencil.serialize()
        if self.instance is not None:
            data["instance"] = self.instance
        return data


def read_space(path: Path, reader: Optional[JsonReader] = None) -> SpaceFile:
    """Load a space file.

    Raises:
        SpaceFileError: If the file is missing or unreadable
        SerializationError: If the content is not a valid space description
    """
    data = (reader or JsonFileReader()).read(path)
    return SpaceFile(LinearMatrix.deserialize(data), data.get("instance"))


__all__ = [
    "JsonFileReader",
    "JsonReader",
    "SpaceFile",
    "dumps",
    "read_space",
    "write_json",
]
