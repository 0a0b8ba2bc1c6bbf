"""Greedy non-maximum suppression and confidence filtering."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from pidkit.shared.logging import get_logger
from pidkit.shared.models import Detection

logger = get_logger(__name__)


class NmsConfig(BaseModel):
    """Suppression threshold and optional output cap."""

    model_config = ConfigDict(frozen=True)

    iou_threshold: float = Field(default=0.7, gt=0.0, le=1.0)
    max_keep: int | None = Field(default=None, ge=1, description="Keep at most this many")


def rank_key(d: Detection) -> tuple[float, int, int]:
    """Ordering used everywhere detections are ranked: confidence desc, then x_min, y_min."""
    return (-d.confidence, d.box.x_min, d.box.y_min)


def nms(dets: list[Detection], cfg: NmsConfig) -> list[Detection]:
    """Keep the best remaining detection, drop those overlapping it by IoU > threshold, repeat.

    Output is sorted by confidence descending.
    """
    if not dets:
        return []
    ordered = sorted(dets, key=rank_key)
    boxes = np.array([d.box.as_tuple() for d in ordered], dtype=np.int64)
    x1, y1, x2, y2 = boxes[:, 0], boxes[:, 1], boxes[:, 2], boxes[:, 3]
    areas = (x2 - x1) * (y2 - y1)

    order = np.arange(len(ordered))
    keep: list[int] = []
    while order.size > 0:
        i = int(order[0])
        keep.append(i)
        if cfg.max_keep is not None and len(keep) >= cfg.max_keep:
            break
        rest = order[1:]
        w = np.maximum(0, np.minimum(x2[i], x2[rest]) - np.maximum(x1[i], x1[rest]))
        h = np.maximum(0, np.minimum(y2[i], y2[rest]) - np.maximum(y1[i], y1[rest]))
        inter = w * h
        iou = inter / (areas[i] + areas[rest] - inter)
        order = rest[iou <= cfg.iou_threshold]

    kept = [ordered[i] for i in keep]
    logger.debug("NMS applied", before=len(dets), after=len(kept))
    return kept


def filter_by_confidence(dets: list[Detection], c_t: float) -> list[Detection]:
    """Order-preserving subset with confidence strictly greater than ``c_t``."""
    if not 0.0 <= c_t <= 1.0:
        raise ValueError(f"confidence threshold must be in [0, 1], got {c_t}")
    return [d for d in dets if d.confidence > c_t]
