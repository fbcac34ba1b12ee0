"""Test space files and report serialization."""

import json
from pathlib import Path
from typing import Any, Dict
from unittest.mock import MagicMock

import pytest

from blowuprank.construct import construct_remark_f2, construct_theorem2
from blowuprank.core import SerializationError, SpaceFileError
from blowuprank.gf import FieldSpec
from blowuprank.io import JsonFileReader, SpaceFile, dumps, read_space, write_json
from blowuprank.serialization import Serializable, report, serialize


class Broken:
    def serialize(self) -> Dict[str, Any]:
        raise KeyError("rows")


class TestSerialization:
    """Test the serialization helpers."""

    def test_protocol(self, gf2: FieldSpec) -> None:
        """Test model objects satisfy the protocol."""
        pencil = construct_theorem2(gf2, 2, 5)
        assert isinstance(pencil, Serializable)
        assert serialize(pencil) == pencil.serialize()

    def test_not_serializable(self) -> None:
        """Test plain objects are rejected."""
        with pytest.raises(SerializationError, match="not serializable"):
            serialize(object())  # type: ignore[arg-type]

    def test_failure_is_wrapped(self) -> None:
        """Test errors inside serialize are wrapped."""
        with pytest.raises(SerializationError, match="Failed to serialize") as info:
            serialize(Broken())
        assert info.value.details == {"object_type": "Broken"}

    def test_report_envelope(self, gf2: FieldSpec) -> None:
        """Test the envelope keys."""
        payload = report("census", {"all_singular": True}, gf2, {"d": 2})
        assert payload["report"] == "census"
        assert payload["field"] == {"p": 2, "k": 1}
        assert payload["parameters"] == {"d": 2}
        assert payload["all_singular"] is True
        assert payload["tool"]["name"] == "blowup-rank"
        assert "field" not in report("census", {})


class TestSpaceFiles:
    """Test reading and writing space files."""

    def test_round_trip(self, gf2: FieldSpec, tmp_path: Path) -> None:
        """Test a written space file reads back with its instance."""
        path = tmp_path / "space.json"
        pencil = construct_theorem2(gf2, 2, 5)
        write_json(SpaceFile(pencil, {"q": 2, "d": 2, "n": 5}).serialize(), path)
        space = read_space(path)
        assert space.pencil == pencil
        assert space.instance == {"q": 2, "d": 2, "n": 5}

    def test_labels_survive(self, tmp_path: Path) -> None:
        """Test custom labels and zero coefficients are kept."""
        path = tmp_path / "remark.json"
        write_json(SpaceFile(construct_remark_f2()).serialize(), path)
        space = read_space(path)
        assert space.pencil.labels == ("a", "b", "c", "d")
        assert space.pencil.coeffs[2].is_zero()
        assert space.instance is None

    def test_custom_reader(self, gf2: FieldSpec) -> None:
        """Test the reader is pluggable."""
        reader = MagicMock()
        reader.read.return_value = construct_theorem2(gf2, 2, 5).serialize()
        space = read_space(Path("memory.json"), reader)
        reader.read.assert_called_once_with(Path("memory.json"))
        assert space.pencil.rows == 5

    def test_missing(self, tmp_path: Path) -> None:
        """Test missing files."""
        with pytest.raises(SpaceFileError, match="Failed to read"):
            JsonFileReader().read(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path: Path) -> None:
        """Test unparsable files report the line."""
        path = tmp_path / "broken.json"
        path.write_text("{\n  'rows': 2\n}", encoding="utf-8")
        with pytest.raises(SpaceFileError, match="Failed to parse") as info:
            JsonFileReader().read(path)
        assert info.value.details["line"] == 2

    def test_not_an_object(self, tmp_path: Path) -> None:
        """Test top-level arrays are rejected."""
        path = tmp_path / "list.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(SpaceFileError, match="JSON object"):
            read_space(path)


class TestOutput:
    """Test JSON output."""

    def test_dumps_is_stable(self) -> None:
        """Test sorted keys, indentation and trailing newline."""
        expected = '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
        assert dumps({"b": 1, "a": [1, 2]}) == expected

    def test_dumps_rejects_objects(self) -> None:
        """Test non-JSON values raise serialization errors."""
        with pytest.raises(SerializationError):
            dumps({"value": object()})

    def test_stdout(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test reports go to standard output without a path."""
        write_json({"rank": 9})
        assert json.loads(capsys.readouterr().out) == {"rank": 9}

    def test_unwritable(self, tmp_path: Path) -> None:
        """Test write failures."""
        with pytest.raises(SpaceFileError, match="Failed to write"):
            write_json({"rank": 9}, tmp_path / "missing" / "out.json")
