"""Feature cropping geometry: AoI bounding rectangle, extension and feature-grid mapping."""

import math
from enum import Enum
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from pidkit.geometry.mask import BinaryMask
from pidkit.shared.errors import GeometryError
from pidkit.shared.models import FeatureRect, Rect


class EmptyAoiPolicy(str, Enum):
    """What the pipeline does with a frame whose AoI mask has no set pixel."""

    SKIP_DETECTION = "skip-detection"
    FULL_FRAME = "full-frame"


class CropConfig(BaseModel):
    """Parameters of the crop-rectangle extension."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(default=1.2, ge=1.0, description="Extension coefficient of the rectangle")
    symmetric: bool = Field(
        default=False, description="Also extend the min coordinates by the mirrored formula"
    )
    empty_aoi_policy: EmptyAoiPolicy = Field(default=EmptyAoiPolicy.SKIP_DETECTION)


def round_half_away(value: Fraction) -> int:
    """Round to nearest integer, ties away from zero."""
    if value >= 0:
        return math.floor(value + Fraction(1, 2))
    return -math.floor(-value + Fraction(1, 2))


def mbr_of_mask(mask: BinaryMask) -> Rect | None:
    """Tightest half-open rectangle around every set pixel; None for an empty mask."""
    cols = np.flatnonzero(mask.bits.any(axis=0))
    if cols.size == 0:
        return None
    rows = np.flatnonzero(mask.bits.any(axis=1))
    return Rect.of(int(cols[0]), int(rows[0]), int(cols[-1]) + 1, int(rows[-1]) + 1)


def _check_inside(rect: Rect, image_w: int, image_h: int) -> None:
    if image_w <= 0 or image_h <= 0:
        raise GeometryError("image dimensions must be positive")
    if not rect.within(image_w, image_h):
        raise GeometryError(f"rectangle {rect.as_tuple()} exceeds image {image_w}x{image_h}")


def extend_rect(rect: Rect, cfg: CropConfig, image_w: int, image_h: int) -> Rect:
    """Extend the max side by ``alpha`` times the extent, clamped to the image.

    X'_max = alpha * (X_max - X_min) + X_min, likewise for Y. With ``cfg.symmetric`` the min side
    moves by the mirrored amount and is clamped at zero.
    """
    _check_inside(rect, image_w, image_h)
    # Exact decimal value of alpha so that ties round predictably.
    alpha = Fraction(str(cfg.alpha))

    x_max = min(round_half_away(alpha * rect.width) + rect.x_min, image_w)
    y_max = min(round_half_away(alpha * rect.height) + rect.y_min, image_h)
    x_min, y_min = rect.x_min, rect.y_min
    if cfg.symmetric:
        x_min = max(rect.x_max - round_half_away(alpha * rect.width), 0)
        y_min = max(rect.y_max - round_half_away(alpha * rect.height), 0)
    return Rect.of(x_min, y_min, x_max, y_max)


def map_rect_to_feature(rect: Rect, stride: int, image_w: int, image_h: int) -> FeatureRect:
    """Map a pixel rectangle to the feature grid of stride ``s``.

    y_max = floor(Y'_max / s) + 1, x_max = floor(X'_max / s) + 1,
    y_min = ceil(Y_min / s) - 1, x_min = ceil(X_min / s) - 1,
    each clamped into [0, ceil(extent / s)].
    """
    if stride <= 0:
        raise GeometryError(f"stride must be positive, got {stride}")
    _check_inside(rect, image_w, image_h)
    grid_w = -(-image_w // stride)
    grid_h = -(-image_h // stride)

    def clamp(v: int, hi: int) -> int:
        return max(0, min(v, hi))

    return FeatureRect(
        x_min=clamp(-(-rect.x_min // stride) - 1, grid_w),
        y_min=clamp(-(-rect.y_min // stride) - 1, grid_h),
        x_max=clamp(rect.x_max // stride + 1, grid_w),
        y_max=clamp(rect.y_max // stride + 1, grid_h),
        stride=stride,
        image_w=image_w,
        image_h=image_h,
    )


def feature_rect_to_pixels(fr: FeatureRect) -> Rect:
    """Pixel region covered by a feature rectangle, clipped to the image."""
    s = fr.stride
    return Rect.of(
        fr.x_min * s,
        fr.y_min * s,
        min(fr.x_max * s, fr.image_w),
        min(fr.y_max * s, fr.image_h),
    )


def crop_region(
    mask: BinaryMask, cfg: CropConfig, stride: int
) -> tuple[Rect | None, FeatureRect | None]:
    """Full cropping chain: MBR, extension, feature mapping and back to pixels.

    Returns (visible pixel region, feature rectangle). For an empty AoI the region follows
    ``cfg.empty_aoi_policy``: None for skip-detection, the whole frame for full-frame.
    """
    mbr = mbr_of_mask(mask)
    if mbr is None:
        if cfg.empty_aoi_policy is EmptyAoiPolicy.FULL_FRAME:
            return Rect.of(0, 0, mask.width, mask.height), None
        return None, None
    extended = extend_rect(mbr, cfg, mask.width, mask.height)
    fr = map_rect_to_feature(extended, stride, mask.width, mask.height)
    return feature_rect_to_pixels(fr), fr
