"""Pixel-space and feature-grid geometry."""

from pidkit.geometry.boxes import bbox_iou, bbox_mask_overlap, intersection_area
from pidkit.geometry.crop import (
    CropConfig,
    EmptyAoiPolicy,
    crop_region,
    extend_rect,
    feature_rect_to_pixels,
    map_rect_to_feature,
    mbr_of_mask,
)
from pidkit.geometry.mask import BinaryMask, decode_rle, encode_rle, load_mask, save_mask

__all__ = [
    "BinaryMask",
    "CropConfig",
    "EmptyAoiPolicy",
    "bbox_iou",
    "bbox_mask_overlap",
    "crop_region",
    "decode_rle",
    "encode_rle",
    "extend_rect",
    "feature_rect_to_pixels",
    "intersection_area",
    "load_mask",
    "map_rect_to_feature",
    "mbr_of_mask",
    "save_mask",
]
