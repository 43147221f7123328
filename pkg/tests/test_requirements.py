"""
Tests for the split between runtime and development requirements
"""
from pathlib import Path

import pytest

TEST_TOOLS = ("pytest", "hypothesis")


def _names(path: str):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [line.split(">=")[0].strip() for line in lines if line.strip() and not line.startswith(("#", "-r"))]


@pytest.mark.parametrize("tool", TEST_TOOLS)
def test_test_tools_are_development_only(tool):
    assert tool not in _names("requirements.txt")
    assert tool in _names("requirements-dev.txt")


def test_development_requirements_include_runtime():
    assert "-r requirements.txt" in Path("requirements-dev.txt").read_text(encoding="utf-8").splitlines()
