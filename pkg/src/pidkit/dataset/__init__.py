"""Cityintrusion-style dataset construction, I/O and statistics."""

from pidkit.dataset.frames import build_frames
from pidkit.dataset.fusion import ReviewItem, fuse_labels, review_candidates
from pidkit.dataset.records import (
    FrameRecord,
    Split,
    ValidationReport,
    read_box_list,
    read_dataset,
    read_detections,
    validate_dataset,
    write_dataset,
)
from pidkit.dataset.stats import (
    PUBLISHED_CITYINTRUSION_STATS,
    DatasetStats,
    dataset_stats,
    drop_empty_frames,
    format_stats,
    split_stats,
)

__all__ = [
    "PUBLISHED_CITYINTRUSION_STATS",
    "DatasetStats",
    "FrameRecord",
    "ReviewItem",
    "Split",
    "ValidationReport",
    "build_frames",
    "dataset_stats",
    "drop_empty_frames",
    "format_stats",
    "fuse_labels",
    "read_box_list",
    "read_dataset",
    "read_detections",
    "review_candidates",
    "split_stats",
    "validate_dataset",
    "write_dataset",
]
