"""Pydantic models for boxes, detections and ground-truth cases."""

import sys
from typing import Any, Literal

if sys.version_info >= (3, 11):
    from typing import Self
else:
    from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator


class BBox(BaseModel):
    """Axis-aligned pixel box, half-open: covers columns x_min..x_max-1 and rows y_min..y_max-1."""

    model_config = ConfigDict(frozen=True)

    x_min: int = Field(ge=0, description="First covered pixel column")
    y_min: int = Field(ge=0, description="First covered pixel row")
    x_max: int = Field(ge=0, description="One past the last covered pixel column")
    y_max: int = Field(ge=0, description="One past the last covered pixel row")

    @model_validator(mode="after")
    def _check_order(self) -> Self:
        if self.x_min >= self.x_max or self.y_min >= self.y_max:
            raise ValueError(
                f"degenerate box ({self.x_min}, {self.y_min}, {self.x_max}, {self.y_max})"
            )
        return self

    @classmethod
    def of(cls, x_min: int, y_min: int, x_max: int, y_max: int) -> Self:
        """Positional constructor."""
        return cls(x_min=x_min, y_min=y_min, x_max=x_max, y_max=y_max)

    @property
    def width(self) -> int:
        return self.x_max - self.x_min

    @property
    def height(self) -> int:
        return self.y_max - self.y_min

    @property
    def area(self) -> int:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x_min + self.x_max) / 2, (self.y_min + self.y_max) / 2)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)

    def contains(self, other: "BBox") -> bool:
        """True if ``other`` lies entirely inside this box."""
        return (
            self.x_min <= other.x_min
            and self.y_min <= other.y_min
            and self.x_max >= other.x_max
            and self.y_max >= other.y_max
        )

    def contains_point(self, x: float, y: float) -> bool:
        """Half-open point membership."""
        return self.x_min <= x < self.x_max and self.y_min <= y < self.y_max

    def within(self, width: int, height: int) -> bool:
        """True if the box fits inside a width x height image."""
        return self.x_max <= width and self.y_max <= height

    def to_wire(self) -> dict[str, Any]:
        """Box-list wire form (x0, y0, x1, y1)."""
        return {"x0": self.x_min, "y0": self.y_min, "x1": self.x_max, "y1": self.y_max}

    @classmethod
    def from_wire(cls, data: dict[str, Any]) -> Self:
        return cls(x_min=data["x0"], y_min=data["y0"], x_max=data["x1"], y_max=data["y1"])


class Rect(BBox):
    """A crop rectangle (MBR or extended MBR) rather than a detection."""


class FeatureRect(BaseModel):
    """Half-open rectangle on the feature grid of an image downsampled by ``stride``."""

    model_config = ConfigDict(frozen=True)

    x_min: int = Field(ge=0)
    y_min: int = Field(ge=0)
    x_max: int = Field(ge=0)
    y_max: int = Field(ge=0)
    stride: int = Field(ge=1, description="Down-sampling factor s of the feature map")
    image_w: int = Field(gt=0, description="Width of the source image in pixels")
    image_h: int = Field(gt=0, description="Height of the source image in pixels")

    @model_validator(mode="after")
    def _check_extent(self) -> Self:
        if self.x_min >= self.x_max or self.y_min >= self.y_max:
            raise ValueError("degenerate feature rectangle")
        if self.x_max > self.grid_w or self.y_max > self.grid_h:
            raise ValueError(
                f"feature rectangle exceeds grid {self.grid_w}x{self.grid_h}"
            )
        return self

    @property
    def grid_w(self) -> int:
        # ceil(W / s)
        return -(-self.image_w // self.stride)

    @property
    def grid_h(self) -> int:
        return -(-self.image_h // self.stride)

    @property
    def cells(self) -> int:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)

    @property
    def grid_cells(self) -> int:
        return self.grid_w * self.grid_h


class Detection(BaseModel):
    """A detected pedestrian box with its confidence score."""

    model_config = ConfigDict(frozen=True)

    box: BBox
    confidence: float = Field(ge=0.0, le=1.0, description="Detector confidence c")

    def to_wire(self) -> dict[str, Any]:
        return {**self.box.to_wire(), "confidence": self.confidence}

    @classmethod
    def from_wire(cls, data: dict[str, Any]) -> Self:
        return cls(box=BBox.from_wire(data), confidence=data.get("confidence", 1.0))


class ScoredDetection(BaseModel):
    """A detection together with its overlap with the frame's AoI mask."""

    model_config = ConfigDict(frozen=True)

    detection: Detection
    overlap_pixels: int = Field(ge=0, description="Set AoI pixels inside the box (p)")

    @property
    def box(self) -> BBox:
        return self.detection.box

    @property
    def confidence(self) -> float:
        return self.detection.confidence


class GroundTruthCase(BaseModel):
    """A labelled person: box plus Intrusion / No Intrusion flag."""

    model_config = ConfigDict(frozen=True)

    box: BBox
    intrusion: bool

    def to_wire(self) -> dict[str, Any]:
        return {**self.box.to_wire(), "intrusion": "Y" if self.intrusion else "N"}

    @classmethod
    def from_wire(cls, data: dict[str, Any]) -> Self:
        flag: Literal["Y", "N"] = data["intrusion"]
        if flag not in ("Y", "N"):
            raise ValueError(f"intrusion must be Y or N, got {flag!r}")
        return cls(box=BBox.from_wire(data), intrusion=flag == "Y")


class Verdict(BaseModel):
    """Per-pedestrian intrusion judgment."""

    model_config = ConfigDict(frozen=True)

    detection: Detection
    overlap_pixels: int = Field(ge=0)
    intruding: bool

    def to_wire(self) -> dict[str, Any]:
        return {
            **self.detection.to_wire(),
            "overlap": self.overlap_pixels,
            "intrusion": "Y" if self.intruding else "N",
        }
