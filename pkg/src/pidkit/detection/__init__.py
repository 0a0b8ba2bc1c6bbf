"""Non-learned detection machinery: anchors, NMS, confidence filtering."""

from pidkit.detection.anchors import AnchorConfig, anchor_shapes, generate_anchors
from pidkit.detection.nms import NmsConfig, filter_by_confidence, nms

__all__ = [
    "AnchorConfig",
    "NmsConfig",
    "anchor_shapes",
    "filter_by_confidence",
    "generate_anchors",
    "nms",
]
