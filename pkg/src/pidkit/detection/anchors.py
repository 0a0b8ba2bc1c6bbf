"""Anchor generation for the region proposal network."""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from pidkit.shared.errors import GeometryError
from pidkit.shared.logging import get_logger
from pidkit.shared.models import BBox

logger = get_logger(__name__)

DEFAULT_SCALES = [32**2, 64**2, 128**2, 256**2, 512**2]
# w:h; tall anchors first for standing pedestrians.
DEFAULT_RATIOS = [(1, 2), (2, 3), (1, 1), (3, 2), (2, 1)]


class AnchorConfig(BaseModel):
    """Anchor areas, aspect ratios and feature stride."""

    model_config = ConfigDict(frozen=True)

    scales: list[int] = Field(
        default_factory=lambda: list(DEFAULT_SCALES),
        min_length=1,
        description="Anchor areas in square pixels",
    )
    ratios: list[tuple[int, int]] = Field(
        default_factory=lambda: list(DEFAULT_RATIOS),
        min_length=1,
        description="Aspect ratios as (w, h) pairs",
    )
    stride: int = Field(default=16, ge=1, description="Feature stride s")

    @field_validator("scales")
    @classmethod
    def _positive_scales(cls, v: list[int]) -> list[int]:
        if any(s <= 0 for s in v):
            raise ValueError("anchor scales must be positive")
        return v

    @field_validator("ratios")
    @classmethod
    def _positive_ratios(cls, v: list[tuple[int, int]]) -> list[tuple[int, int]]:
        if any(w <= 0 or h <= 0 for w, h in v):
            raise ValueError("anchor ratios must be positive")
        return v

    @property
    def anchors_per_cell(self) -> int:
        return len(self.scales) * len(self.ratios)


def exact_anchor_shape(scale: int, ratio: tuple[int, int]) -> tuple[float, float]:
    """Unrounded (width, height) with w*h = scale and w/h = ratio."""
    r = ratio[0] / ratio[1]
    return math.sqrt(scale * r), math.sqrt(scale / r)


def anchor_shapes(cfg: AnchorConfig) -> list[tuple[int, int]]:
    """Rounded (width, height) per (scale, ratio), scale-major."""
    shapes = []
    for scale in cfg.scales:
        for ratio in cfg.ratios:
            w, h = exact_anchor_shape(scale, ratio)
            shapes.append((max(1, math.floor(w + 0.5)), max(1, math.floor(h + 0.5))))
    return shapes


def generate_anchors(
    cfg: AnchorConfig,
    grid_w: int,
    grid_h: int,
    image_w: int | None = None,
    image_h: int | None = None,
) -> list[BBox]:
    """Place every anchor shape at every grid-cell center, clipped to the image.

    The image defaults to ``grid * stride``. Anchors that clip to nothing are dropped.
    Order is row-major over cells, then scale, then ratio.
    """
    if grid_w <= 0 or grid_h <= 0:
        raise GeometryError("grid dimensions must be positive")
    if not cfg.scales or not cfg.ratios:
        raise GeometryError("anchor configuration needs at least one scale and one ratio")
    s = cfg.stride
    width = image_w if image_w is not None else grid_w * s
    height = image_h if image_h is not None else grid_h * s

    shapes = np.asarray(anchor_shapes(cfg), dtype=np.float64)  # (A, 2)
    jj, ii = np.meshgrid(np.arange(grid_h), np.arange(grid_w), indexing="ij")
    cx = ((ii.ravel() + 0.5) * s)[:, np.newaxis]  # (G, 1)
    cy = ((jj.ravel() + 0.5) * s)[:, np.newaxis]

    x0 = np.floor(cx - shapes[:, 0] / 2 + 0.5)
    y0 = np.floor(cy - shapes[:, 1] / 2 + 0.5)
    x1 = x0 + shapes[:, 0]
    y1 = y0 + shapes[:, 1]

    boxes = np.stack(
        [
            np.clip(x0, 0, width),
            np.clip(y0, 0, height),
            np.clip(x1, 0, width),
            np.clip(y1, 0, height),
        ],
        axis=-1,
    ).reshape(-1, 4).astype(np.int64)
    valid = (boxes[:, 2] > boxes[:, 0]) & (boxes[:, 3] > boxes[:, 1])

    anchors = [BBox.of(*(int(v) for v in row)) for row in boxes[valid]]
    logger.debug(
        "Anchors generated",
        grid=f"{grid_w}x{grid_h}",
        per_cell=cfg.anchors_per_cell,
        kept=len(anchors),
        dropped=int((~valid).sum()),
    )
    return anchors
