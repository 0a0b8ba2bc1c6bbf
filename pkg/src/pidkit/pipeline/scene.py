"""Deterministic synthetic street scenes: a road polygon and pedestrian boxes with fused labels."""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import partial
import sys

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

if sys.version_info >= (3, 11):
    from typing import Self
else:
    from typing_extensions import Self

from pidkit.dataset.fusion import fuse_labels
from pidkit.geometry.boxes import bbox_iou
from pidkit.geometry.mask import BinaryMask, Point
from pidkit.judge import DEFAULT_P_T
from pidkit.shared.errors import GeometryError
from pidkit.shared.logging import get_logger
from pidkit.shared.models import BBox, GroundTruthCase

logger = get_logger(__name__)

MAX_PLACEMENT_TRIES = 50
MAX_PEDESTRIAN_IOU = 0.3


class SceneParams(BaseModel):
    """Frame size, pedestrian count and size ranges of generated scenes."""

    model_config = ConfigDict(frozen=True)

    width: int = Field(default=1024, gt=0)
    height: int = Field(default=512, gt=0)
    min_pedestrians: int = Field(default=2, ge=1)
    max_pedestrians: int = Field(default=8, ge=1)
    min_ped_width: int = Field(default=12, ge=4)
    max_ped_width: int = Field(default=60, ge=4)
    horizon: tuple[float, float] = Field(
        default=(0.35, 0.6), description="Range of the road's top edge as a fraction of height"
    )
    p_t: int = Field(default=DEFAULT_P_T, ge=0, description="Label fusion threshold")

    @model_validator(mode="after")
    def _check_ranges(self) -> Self:
        if self.min_pedestrians > self.max_pedestrians:
            raise ValueError("min_pedestrians must not exceed max_pedestrians")
        if self.min_ped_width > self.max_ped_width:
            raise ValueError("min_ped_width must not exceed max_ped_width")
        lo, hi = self.horizon
        if not 0.0 < lo <= hi < 1.0:
            raise ValueError("horizon must satisfy 0 < low <= high < 1")
        if 3 * self.max_ped_width > self.height * (1.0 - hi):
            raise ValueError("pedestrians are too tall for the road band")
        if self.width < 4 * self.max_ped_width:
            raise ValueError("frame is too narrow for the pedestrian sizes")
        return self


@dataclass(frozen=True)
class Scene:
    """One frame: AoI mask (rasterized road), pedestrians and their fused labels."""

    width: int
    height: int
    road_polygon: list[Point]
    pedestrians: list[BBox]
    gt_cases: list[GroundTruthCase]
    mask: BinaryMask
    seed: int = 0
    frame_id: str = field(default="")

    def verify_labels(self, p_t: int = DEFAULT_P_T) -> bool:
        """Re-check every label against an independent per-pixel count."""
        bits = self.mask.bits
        for case in self.gt_cases:
            b = case.box
            count = int(np.count_nonzero(bits[b.y_min : b.y_max, b.x_min : b.x_max]))
            if (count > p_t) != case.intrusion:
                return False
        return True


def build_scene(
    width: int,
    height: int,
    road_polygon: Sequence[Point],
    pedestrians: Sequence[BBox],
    p_t: int = DEFAULT_P_T,
    seed: int = 0,
    frame_id: str = "",
) -> Scene:
    """Rasterize the road and fuse labels; rejects degenerate polygons and off-frame boxes."""
    mask = BinaryMask.from_polygon(road_polygon, width, height)
    outside = [p for p in pedestrians if not p.within(width, height)]
    if outside:
        raise GeometryError(f"pedestrian {outside[0].as_tuple()} outside {width}x{height} frame")
    return Scene(
        width=width,
        height=height,
        road_polygon=list(road_polygon),
        pedestrians=list(pedestrians),
        gt_cases=fuse_labels(mask, list(pedestrians), p_t),
        mask=mask,
        seed=seed,
        frame_id=frame_id or f"scene-{seed}",
    )


def _pedestrian(
    rng: np.random.Generator,
    params: SceneParams,
    x_range: tuple[int, int],
    y_max_range: tuple[int, int],
) -> BBox:
    w = int(rng.integers(params.min_ped_width, params.max_ped_width + 1))
    h = int(round(w * rng.uniform(2.0, 3.0)))
    x_min = int(rng.integers(x_range[0], max(x_range[0] + 1, x_range[1] - w + 1)))
    y_max = int(rng.integers(y_max_range[0], y_max_range[1] + 1))
    return BBox.of(x_min, max(0, y_max - h), min(x_min + w, params.width), y_max)


def _place(
    rng: np.random.Generator, placed: list[BBox], make: Callable[[np.random.Generator], BBox]
) -> BBox | None:
    for _ in range(MAX_PLACEMENT_TRIES):
        box = make(rng)
        if all(bbox_iou(box, other) <= MAX_PEDESTRIAN_IOU for other in placed):
            return box
    return None


def generate_scene(params: SceneParams, seed: int) -> Scene:
    """Trapezoid road over the full bottom edge; pedestrians on the sidewalk band or on the road.

    Pedestrians either stand wholly above the road's top edge or have their center on road
    rows, and at least one stands at the bottom center of the road.
    """
    rng = np.random.default_rng(seed)
    W, H = params.width, params.height
    y_top = int(round(H * rng.uniform(*params.horizon)))
    tl = int(round(W * rng.uniform(0.2, 0.45)))
    tr = int(round(W * rng.uniform(0.55, 0.8)))
    road: list[Point] = [(0, H), (W, H), (tr, y_top), (tl, y_top)]

    max_h = 3 * params.max_ped_width
    half_w = params.max_ped_width
    on_road = partial(_pedestrian, params=params, x_range=(0, W), y_max_range=(y_top + max_h // 2 + 2, H))
    sidewalk = partial(_pedestrian, params=params, x_range=(0, W), y_max_range=(min(max_h, y_top), y_top))
    anchor = partial(
        _pedestrian, params=params, x_range=(W // 2 - half_w, W // 2 + half_w), y_max_range=(H - 2, H)
    )

    placed = [anchor(rng)]
    target = int(rng.integers(params.min_pedestrians, params.max_pedestrians + 1))
    while len(placed) < target:
        make = on_road if rng.random() < 0.6 else sidewalk
        box = _place(rng, placed, make)
        if box is None:
            break
        placed.append(box)

    scene = build_scene(W, H, road, placed, params.p_t, seed)
    logger.debug(
        "Scene generated",
        seed=seed,
        pedestrians=len(placed),
        intrusions=sum(c.intrusion for c in scene.gt_cases),
    )
    return scene


def generate_boundary_scene(seed: int, params: SceneParams | None = None, stride: int = 16) -> Scene:
    """Road rectangle with one pedestrian straddling its right edge.

    The straddling pedestrian's center lies beyond the unextended crop but inside the crop
    extended by 1.2, so only extension lets a center-membership detector see it.
    """
    params = params or SceneParams()
    rng = np.random.default_rng(seed)
    W, H = params.width, params.height
    right = int(rng.integers(400, 801))
    y_top = int(rng.integers(200, 301))
    road: list[Point] = [(0, y_top), (right, y_top), (right, H), (0, H)]

    overhang = 8
    w = int(rng.integers(max(50, 2 * (stride + overhang) + 2), 71))
    h = int(round(w * rng.uniform(2.0, 2.8)))
    y_max = int(rng.integers(y_top + h, H + 1))
    straddler = BBox.of(right - overhang, y_max - h, right - overhang + w, y_max)

    placed = [straddler]
    interior = partial(
        _pedestrian,
        params=params,
        x_range=(0, right - 100),
        y_max_range=(y_top + 3 * params.max_ped_width // 2 + 2, H),
    )
    for _ in range(int(rng.integers(1, 4))):
        box = _place(rng, placed, interior)
        if box is not None:
            placed.append(box)

    return build_scene(W, H, road, placed, params.p_t, seed, frame_id=f"boundary-{seed}")
