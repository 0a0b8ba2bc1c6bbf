"""Dataset and box-list files (UTF-8 JSON Lines) with positioned validation."""

from __future__ import annotations

import json
import os
import tempfile
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError

from pidkit.geometry.mask import RLE_MAGIC, BinaryMask, decode_rle, load_mask
from pidkit.shared.errors import (
    EXIT_OK,
    DatasetError,
    DatasetFormatError,
    DatasetSemanticError,
    MaskFormatError,
)
from pidkit.shared.logging import get_logger
from pidkit.shared.models import Detection, GroundTruthCase

logger = get_logger(__name__)


class Split(str, Enum):
    TRAIN = "train"
    VAL = "val"


def case_sort_key(case: GroundTruthCase) -> tuple[int, int, int, int, bool]:
    b = case.box
    return (b.y_min, b.x_min, b.y_max, b.x_max, case.intrusion)


class FrameRecord(BaseModel):
    """One annotated frame: image size, AoI mask reference and labelled cases."""

    frame_id: str = Field(min_length=1)
    city: str
    split: Split
    width: int = Field(gt=0)
    height: int = Field(gt=0)
    mask: str = Field(description="Mask file path (relative to the dataset) or inline rle text")
    cases: list[GroundTruthCase] = Field(default_factory=list)

    @property
    def mask_is_inline(self) -> bool:
        return self.mask.startswith(RLE_MAGIC)

    @property
    def intrusion_count(self) -> int:
        return sum(1 for c in self.cases if c.intrusion)

    def load_mask(self, base_dir: Path | None = None) -> BinaryMask:
        """Decode the inline mask or load it from ``base_dir / mask``."""
        if self.mask_is_inline:
            return decode_rle(self.mask)
        path = Path(self.mask)
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        return load_mask(path)

    def out_of_bounds(self) -> list[GroundTruthCase]:
        return [c for c in self.cases if not c.box.within(self.width, self.height)]

    def canonical(self) -> FrameRecord:
        return self.model_copy(update={"cases": sorted(self.cases, key=case_sort_key)})

    def to_dict(self) -> dict[str, Any]:
        """Convert to the wire dictionary (fixed key order)."""
        return {
            "frame_id": self.frame_id,
            "city": self.city,
            "split": self.split.value,
            "width": self.width,
            "height": self.height,
            "mask": self.mask,
            "cases": [c.to_wire() for c in self.cases],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> FrameRecord:
        """Create a FrameRecord from its wire dictionary."""
        return cls(
            frame_id=data["frame_id"],
            city=data["city"],
            split=Split(data["split"]),
            width=data["width"],
            height=data["height"],
            mask=data["mask"],
            cases=[GroundTruthCase.from_wire(c) for c in data.get("cases", [])],
        )


def _decoded_lines(path: Path) -> Iterator[tuple[int, str | DatasetFormatError]]:
    """Non-blank lines of a JSON Lines file; a line that is not UTF-8 comes back as an error."""
    with open(path, "rb") as f:
        for lineno, raw in enumerate(f, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                yield lineno, DatasetFormatError(f"invalid UTF-8 at byte {e.start}", path, lineno)
                continue
            if line.strip():
                yield lineno, line


def _parse_record(text: str, path: Path, lineno: int) -> FrameRecord:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DatasetFormatError(f"invalid JSON: {e.msg}", path, lineno) from e
    if not isinstance(data, dict):
        raise DatasetFormatError("record must be a JSON object", path, lineno)
    try:
        return FrameRecord.from_dict(data)
    except KeyError as e:
        raise DatasetFormatError(f"missing field {e.args[0]!r}", path, lineno) from e
    except (ValidationError, ValueError, TypeError) as e:
        raise DatasetFormatError(f"bad record: {e}", path, lineno) from e


def _check_record(
    record: FrameRecord, path: Path, lineno: int | None, check_masks: bool
) -> None:
    outside = record.out_of_bounds()
    if outside:
        box = outside[0].box
        raise DatasetSemanticError(
            f"frame {record.frame_id!r}: case {box.as_tuple()} exceeds image "
            f"{record.width}x{record.height}",
            path,
            lineno,
        )
    if not check_masks:
        return
    if not record.mask_is_inline and not (path.parent / record.mask).exists():
        raise DatasetSemanticError(
            f"frame {record.frame_id!r}: mask file {record.mask!r} not found", path, lineno
        )
    try:
        mask = record.load_mask(path.parent)
    except MaskFormatError as e:
        raise DatasetSemanticError(f"frame {record.frame_id!r}: bad mask: {e}", path, lineno) from e
    if (mask.width, mask.height) != (record.width, record.height):
        raise DatasetSemanticError(
            f"frame {record.frame_id!r}: mask is {mask.width}x{mask.height}, "
            f"frame is {record.width}x{record.height}",
            path,
            lineno,
        )


def _scan(path: Path, check_masks: bool) -> Iterator[FrameRecord | DatasetError]:
    seen: dict[str, int] = {}
    for lineno, line in _decoded_lines(path):
        try:
            if isinstance(line, DatasetError):
                raise line
            record = _parse_record(line, path, lineno)
            if record.frame_id in seen:
                raise DatasetSemanticError(
                    f"duplicate frame_id {record.frame_id!r} (first on line "
                    f"{seen[record.frame_id]})",
                    path,
                    lineno,
                )
            seen[record.frame_id] = lineno
            _check_record(record, path, lineno, check_masks)
        except DatasetError as e:
            yield e
            continue
        yield record


def read_dataset(path: Path | str, check_masks: bool = True) -> list[FrameRecord]:
    """Read and validate a dataset file; the first problem raises a positioned DatasetError."""
    path = Path(path)
    records = []
    for item in _scan(path, check_masks):
        if isinstance(item, DatasetError):
            raise item
        records.append(item)
    logger.info("Loaded dataset", path=str(path), frames=len(records))
    return records


@dataclass
class ValidationReport:
    """Every problem found in a dataset file."""

    frames: int = 0
    issues: list[DatasetError] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return max((e.exit_code for e in self.issues), default=EXIT_OK)


def validate_dataset(path: Path | str, check_masks: bool = True) -> ValidationReport:
    """Check every record, collecting all positioned issues instead of stopping at the first."""
    path = Path(path)
    report = ValidationReport()
    for item in _scan(path, check_masks):
        if isinstance(item, DatasetError):
            report.issues.append(item)
        else:
            report.frames += 1
    logger.info(
        "Validated dataset", path=str(path), frames=report.frames, issues=len(report.issues)
    )
    return report


def dumps_record(record: FrameRecord) -> str:
    return json.dumps(record.canonical().to_dict(), ensure_ascii=False)


def write_dataset(records: Iterable[FrameRecord], path: Path | str) -> None:
    """Write records in canonical order (frames by frame_id, cases by (y_min, x_min)).

    The file is written to a temporary sibling and moved into place, so readers never observe
    a partial dataset.
    """
    path = Path(path)
    ordered = sorted(records, key=lambda r: r.frame_id)
    seen: set[str] = set()
    for record in ordered:
        if record.frame_id in seen:
            raise DatasetSemanticError(f"duplicate frame_id {record.frame_id!r}", path)
        seen.add(record.frame_id)
        _check_record(record, path, None, check_masks=False)

    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            for record in ordered:
                f.write(dumps_record(record) + "\n")
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.info("Wrote dataset", path=str(path), frames=len(ordered))


def _read_json_lines(path: Path) -> Iterator[tuple[int, dict[str, Any]]]:
    for lineno, line in _decoded_lines(path):
        if isinstance(line, DatasetError):
            raise line
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise DatasetFormatError(f"invalid JSON: {e.msg}", path, lineno) from e
        if not isinstance(data, dict):
            raise DatasetFormatError("line must be a JSON object", path, lineno)
        yield lineno, data


def read_box_list(path: Path | str) -> list[Detection]:
    """Read a box list (x0, y0, x1, y1, optional confidence per line)."""
    path = Path(path)
    boxes = []
    for lineno, data in _read_json_lines(path):
        try:
            boxes.append(Detection.from_wire(data))
        except KeyError as e:
            raise DatasetFormatError(f"missing field {e.args[0]!r}", path, lineno) from e
        except (ValidationError, TypeError) as e:
            raise DatasetFormatError(f"bad box: {e}", path, lineno) from e
    return boxes


def read_detections(path: Path | str) -> dict[str, list[Detection]]:
    """Read per-frame detections: {"frame_id": ..., "detections": [box objects]} per line."""
    path = Path(path)
    by_frame: dict[str, list[Detection]] = {}
    for lineno, data in _read_json_lines(path):
        try:
            frame_id = str(data["frame_id"])
            dets = [Detection.from_wire(d) for d in data.get("detections", [])]
        except KeyError as e:
            raise DatasetFormatError(f"missing field {e.args[0]!r}", path, lineno) from e
        except (ValidationError, TypeError) as e:
            raise DatasetFormatError(f"bad detection: {e}", path, lineno) from e
        by_frame.setdefault(frame_id, []).extend(dets)
    return by_frame


def dumps_lines(items: Iterable[dict[str, Any]]) -> str:
    """Serialize wire dictionaries as JSON Lines."""
    return "".join(json.dumps(item) + "\n" for item in items)
