"""Shared pytest fixtures for pidkit tests."""

import json
import tempfile
from pathlib import Path
from typing import Any

import numpy as np
import pytest
import yaml

from pidkit.geometry.mask import BinaryMask, encode_rle
from pidkit.shared.logging import configure_logging


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    """Keep log output to warnings during tests."""
    configure_logging("WARNING")


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def temp_yaml_file(temp_dir):
    """Create a temporary YAML file."""

    def _create(filename: str, content: dict[str, Any]) -> Path:
        path = temp_dir / filename
        with open(path, "w") as f:
            yaml.dump(content, f)
        return path

    return _create


@pytest.fixture
def jsonl_file(temp_dir):
    """Write a list of objects as JSON Lines."""

    def _create(filename: str, rows: list[dict[str, Any]]) -> Path:
        path = temp_dir / filename
        path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
        return path

    return _create


@pytest.fixture
def full_mask():
    """10x10 mask with every pixel set."""
    return BinaryMask.ones(10, 10)


@pytest.fixture
def empty_mask():
    """10x10 mask with no pixel set."""
    return BinaryMask.zeros(10, 10)


@pytest.fixture
def top_rows_mask():
    """10x10 mask with rows 0..3 set."""
    bits = np.zeros((10, 10), dtype=bool)
    bits[0:4, :] = True
    return BinaryMask(bits)


@pytest.fixture
def road_mask():
    """64x32 frame whose bottom half (rows 16..31) is road."""
    bits = np.zeros((32, 64), dtype=bool)
    bits[16:, :] = True
    return BinaryMask(bits)


@pytest.fixture
def inline_rle():
    """Inline rle text of the bottom-half road mask."""
    bits = np.zeros((32, 64), dtype=bool)
    bits[16:, :] = True
    return encode_rle(BinaryMask(bits))
