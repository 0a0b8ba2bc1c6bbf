"""Pair dataset records with detection files for evaluation."""

from collections.abc import Sequence
from pathlib import Path

from pidkit.dataset.records import FrameRecord
from pidkit.geometry.boxes import bbox_mask_overlap
from pidkit.metrics.models import FrameEval
from pidkit.shared.logging import get_logger
from pidkit.shared.models import Detection, ScoredDetection

logger = get_logger(__name__)


def build_frames(
    records: Sequence[FrameRecord],
    detections: dict[str, list[Detection]],
    base_dir: Path | None = None,
) -> list[FrameEval]:
    """Score every frame's detections against its AoI mask; frames without detections get none."""
    frames = []
    for record in records:
        mask = record.load_mask(base_dir)
        scored = [
            ScoredDetection(detection=d, overlap_pixels=bbox_mask_overlap(d.box, mask))
            for d in detections.get(record.frame_id, [])
        ]
        frames.append(FrameEval(frame_id=record.frame_id, detections=scored, gts=record.cases))

    unknown = sorted(set(detections) - {r.frame_id for r in records})
    if unknown:
        logger.warning("Detections for unknown frames ignored", frames=len(unknown), first=unknown[0])
    return frames
