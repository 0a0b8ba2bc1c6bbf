"""Binary AoI masks: construction, polygon rasterization and file formats.

Masks are stored as read-only ``(height, width)`` boolean numpy arrays. Two on-disk formats are
supported:

* binary portable graymap (magic ``P5``, maxval 255, nonzero = set)
* run-length text ``rle v1: <width> <height> <val0> <run> <run> ...`` over the row-major raster,
  runs alternating starting with ``val0``
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt

from pidkit.shared.errors import GeometryError, MaskFormatError

RLE_MAGIC = "rle v1:"

Point = tuple[float, float]


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Immutable H x W binary raster of the area of interest (1 = AoI)."""

    bits: npt.NDArray[np.bool_]

    def __post_init__(self) -> None:
        bits = np.asarray(self.bits)
        if bits.ndim != 2 or bits.shape[0] == 0 or bits.shape[1] == 0:
            raise GeometryError(f"mask must be a non-empty 2-D raster, got shape {bits.shape}")
        bits = np.array(bits != 0, dtype=np.bool_)
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def width(self) -> int:
        return int(self.bits.shape[1])

    @property
    def height(self) -> int:
        return int(self.bits.shape[0])

    @property
    def set_count(self) -> int:
        return int(np.count_nonzero(self.bits))

    @classmethod
    def zeros(cls, width: int, height: int) -> BinaryMask:
        return cls(np.zeros((height, width), dtype=np.bool_))

    @classmethod
    def ones(cls, width: int, height: int) -> BinaryMask:
        return cls(np.ones((height, width), dtype=np.bool_))

    @classmethod
    def from_polygon(cls, vertices: Sequence[Point], width: int, height: int) -> BinaryMask:
        return cls(rasterize_polygon(vertices, width, height))

    def union(self, other: BinaryMask) -> BinaryMask:
        if self.bits.shape != other.bits.shape:
            raise GeometryError("mask shapes differ")
        return BinaryMask(self.bits | other.bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash((self.bits.shape, self.bits.tobytes()))


def polygon_area(vertices: Sequence[Point]) -> float:
    """Signed shoelace area."""
    pts = np.asarray(vertices, dtype=np.float64)
    x, y = pts[:, 0], pts[:, 1]
    return float(0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))


def rasterize_polygon(
    vertices: Sequence[Point], width: int, height: int
) -> npt.NDArray[np.bool_]:
    """Rasterize a simple or self-intersecting polygon with the even-odd rule.

    A pixel is set when its center ``(x + 0.5, y + 0.5)`` is inside the polygon.
    """
    if len(vertices) < 3:
        raise GeometryError(f"polygon needs at least 3 vertices, got {len(vertices)}")
    if abs(polygon_area(vertices)) == 0.0:
        raise GeometryError("degenerate polygon (zero area)")
    if width <= 0 or height <= 0:
        raise GeometryError("raster dimensions must be positive")

    px = np.arange(width, dtype=np.float64)[np.newaxis, :] + 0.5
    py = np.arange(height, dtype=np.float64)[:, np.newaxis] + 0.5
    inside = np.zeros((height, width), dtype=np.bool_)

    n = len(vertices)
    for i in range(n):
        x1, y1 = (float(v) for v in vertices[i])
        x2, y2 = (float(v) for v in vertices[(i + 1) % n])
        if y1 == y2:
            continue
        # Rows whose center line crosses this edge, and the crossing abscissa per row.
        crosses = (y1 > py) != (y2 > py)
        x_cross = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (px < x_cross)
    return inside


def encode_rle(mask: BinaryMask) -> str:
    """Encode a mask as ``rle v1`` text."""
    flat = mask.bits.ravel().astype(np.int8)
    boundaries = np.flatnonzero(np.diff(flat)) + 1
    edges = np.concatenate(([0], boundaries, [flat.size]))
    runs = np.diff(edges)
    body = " ".join(str(int(r)) for r in runs)
    return f"{RLE_MAGIC} {mask.width} {mask.height} {int(flat[0])} {body}"


def decode_rle(text: str) -> BinaryMask:
    """Decode ``rle v1`` text into a mask."""
    stripped = text.strip()
    if not stripped.startswith(RLE_MAGIC):
        raise MaskFormatError(f"missing {RLE_MAGIC!r} header")
    fields = stripped[len(RLE_MAGIC):].split()
    if len(fields) < 3:
        raise MaskFormatError("rle header needs width, height and first value")
    try:
        width, height, val0, *runs = (int(f) for f in fields)
    except ValueError as e:
        raise MaskFormatError(f"non-integer rle field: {e}") from e
    if width <= 0 or height <= 0:
        raise MaskFormatError("rle dimensions must be positive")
    if val0 not in (0, 1):
        raise MaskFormatError(f"first run value must be 0 or 1, got {val0}")
    if any(r <= 0 for r in runs):
        raise MaskFormatError("rle runs must be positive")
    if sum(runs) != width * height:
        raise MaskFormatError(f"rle runs cover {sum(runs)} pixels, expected {width * height}")

    values = (np.arange(len(runs)) + val0) % 2
    flat = np.repeat(values.astype(np.bool_), runs)
    return BinaryMask(flat.reshape(height, width))


def _pgm_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments."""
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < count:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise MaskFormatError("truncated PGM header")
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    # Exactly one whitespace byte separates the header from the raster.
    return tokens, pos + 1


def decode_pgm(data: bytes) -> BinaryMask:
    """Decode a binary (P5) graymap; nonzero samples are set."""
    tokens, offset = _pgm_tokens(data, 4)
    if tokens[0] != b"P5":
        raise MaskFormatError(f"expected P5 magic, got {tokens[0]!r}")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as e:
        raise MaskFormatError(f"bad PGM header: {e}") from e
    if width <= 0 or height <= 0:
        raise MaskFormatError("PGM dimensions must be positive")
    if not 0 < maxval < 256:
        raise MaskFormatError(f"only 8-bit PGM supported, maxval={maxval}")
    raster = data[offset : offset + width * height]
    if len(raster) != width * height:
        raise MaskFormatError(f"PGM raster has {len(raster)} bytes, expected {width * height}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return BinaryMask(pixels != 0)


def encode_pgm(mask: BinaryMask) -> bytes:
    """Encode a mask as P5 with maxval 255 (set = 255)."""
    header = f"P5\n{mask.width} {mask.height}\n255\n".encode("ascii")
    return header + (mask.bits.astype(np.uint8) * 255).tobytes()


def load_mask(path: Path | str) -> BinaryMask:
    """Load a mask file, choosing the format by content (P5 magic or rle header)."""
    data = Path(path).read_bytes()
    if data.startswith(b"P5"):
        return decode_pgm(data)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise MaskFormatError(f"{path}: neither P5 nor rle text") from e
    return decode_rle(text)


def save_mask(mask: BinaryMask, path: Path | str) -> None:
    """Save a mask; ``.pgm`` suffix selects P5, anything else rle text."""
    target = Path(path)
    if target.suffix.lower() == ".pgm":
        target.write_bytes(encode_pgm(mask))
    else:
        target.write_text(encode_rle(mask) + "\n", encoding="utf-8")
