"""Test package metadata."""

import blowuprank
from blowuprank.serialization import TOOL_NAME, tool_info


def test_package_name() -> None:
    """Test the package name."""
    assert blowuprank.__name__ == "blowuprank"


def test_version() -> None:
    """Test package version."""
    assert blowuprank.__version__ == "0.1.0"


def test_tool_info() -> None:
    """Test reports carry the tool name and version."""
    assert tool_info() == {"name": TOOL_NAME, "version": blowuprank.__version__}
    assert TOOL_NAME == "blowup-rank"
