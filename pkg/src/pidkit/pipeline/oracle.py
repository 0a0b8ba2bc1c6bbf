"""Seeded stand-in for the learned detector: ground-truth boxes with configurable noise."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from pidkit.pipeline.scene import Scene
from pidkit.shared.models import BBox, Detection, Rect

SPURIOUS_WIDTH = (12, 60)
SPURIOUS_ASPECT = (2.0, 3.0)


class DetectorNoise(BaseModel):
    """Localization jitter, misses, false boxes and the confidence model."""

    model_config = ConfigDict(frozen=True)

    jitter_px: int = Field(default=0, ge=0, description="Max uniform perturbation per edge")
    drop_prob: float = Field(default=0.0, ge=0.0, le=1.0)
    spurious_rate: float = Field(default=0.0, ge=0.0, description="Expected false boxes per frame")
    mean_true: float = Field(default=0.95, ge=0.0, le=1.0)
    mean_false: float = Field(default=0.6, ge=0.0, le=1.0)
    spread: float = Field(default=0.0, ge=0.0, description="Std-dev of confidences")
    seed: int = Field(default=0, ge=0)

    @property
    def noiseless(self) -> bool:
        return self.jitter_px == 0 and self.drop_prob == 0.0 and self.spurious_rate == 0.0


def _confidence(rng: np.random.Generator, mean: float, spread: float) -> float:
    return float(np.clip(mean + spread * rng.standard_normal(), 0.0, 1.0))


def _jitter(rng: np.random.Generator, box: BBox, px: int, width: int, height: int) -> BBox:
    dx0, dy0, dx1, dy1 = (int(d) for d in rng.integers(-px, px + 1, size=4))
    x0 = min(max(box.x_min + dx0, 0), width - 1)
    y0 = min(max(box.y_min + dy0, 0), height - 1)
    x1 = min(max(box.x_max + dx1, x0 + 1), width)
    y1 = min(max(box.y_max + dy1, y0 + 1), height)
    return BBox.of(x0, y0, x1, y1)


def _spurious(rng: np.random.Generator, region: Rect) -> BBox:
    w = min(int(rng.integers(SPURIOUS_WIDTH[0], SPURIOUS_WIDTH[1] + 1)), region.width)
    h = min(int(round(w * rng.uniform(*SPURIOUS_ASPECT))), region.height)
    x0 = int(rng.integers(region.x_min, region.x_max - w + 1))
    y0 = int(rng.integers(region.y_min, region.y_max - h + 1))
    return BBox.of(x0, y0, x0 + w, y0 + h)


def oracle_detect(scene: Scene, noise: DetectorNoise, visible_region: Rect | None) -> list[Detection]:
    """Detect pedestrians whose box center lies in ``visible_region``, plus spurious boxes.

    The generator is seeded from (noise seed, scene seed), so each frame draws its own stream
    and results do not depend on processing order. Every pedestrian consumes the same draws
    whether or not it is visible.
    """
    rng = np.random.default_rng([noise.seed, scene.seed])
    detections: list[Detection] = []
    for box in scene.pedestrians:
        dropped = rng.random() < noise.drop_prob
        jittered = _jitter(rng, box, noise.jitter_px, scene.width, scene.height)
        confidence = _confidence(rng, noise.mean_true, noise.spread)
        if dropped or visible_region is None or not visible_region.contains_point(*box.center):
            continue
        detections.append(Detection(box=jittered, confidence=confidence))

    if visible_region is not None:
        for _ in range(int(rng.poisson(noise.spurious_rate))):
            box = _spurious(rng, visible_region)
            detections.append(
                Detection(box=box, confidence=_confidence(rng, noise.mean_false, noise.spread))
            )
    return detections
