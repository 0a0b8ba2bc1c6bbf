"""Overlap and IoU primitives on half-open pixel boxes."""

from pidkit.geometry.mask import BinaryMask
from pidkit.shared.models import BBox


def intersection_area(a: BBox, b: BBox) -> int:
    """Number of pixels covered by both boxes."""
    w = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    h = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if w <= 0 or h <= 0:
        return 0
    return w * h


def bbox_iou(a: BBox, b: BBox) -> float:
    """Intersection over union in [0, 1]; 0 for disjoint boxes."""
    inter = intersection_area(a, b)
    if inter == 0:
        return 0.0
    return inter / (a.area + b.area - inter)


def bbox_mask_overlap(box: BBox, mask: BinaryMask) -> int:
    """Count set mask pixels inside the box; the box is clamped to the mask extent."""
    x0 = min(box.x_min, mask.width)
    y0 = min(box.y_min, mask.height)
    x1 = min(box.x_max, mask.width)
    y1 = min(box.y_max, mask.height)
    if x0 >= x1 or y0 >= y1:
        return 0
    return int(mask.bits[y0:y1, x0:x1].sum())
