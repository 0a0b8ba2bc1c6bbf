"""Preliminary Intrusion / No Intrusion labels from AoI masks and person boxes."""

from pydantic import BaseModel, ConfigDict

from pidkit.geometry.boxes import bbox_mask_overlap
from pidkit.geometry.mask import BinaryMask
from pidkit.judge import DEFAULT_P_T, JudgeConfig, judge_intrusion
from pidkit.shared.logging import get_logger
from pidkit.shared.models import BBox, GroundTruthCase

logger = get_logger(__name__)

REVIEW_BAND = 0.25


class ReviewItem(BaseModel):
    """A fused case close enough to the threshold to deserve a manual look."""

    model_config = ConfigDict(frozen=True)

    box: BBox
    overlap_pixels: int
    intrusion: bool

    def to_wire(self) -> dict[str, object]:
        return {
            **self.box.to_wire(),
            "overlap": self.overlap_pixels,
            "intrusion": "Y" if self.intrusion else "N",
        }


def fuse_labels(
    mask: BinaryMask, person_boxes: list[BBox], p_t: int = DEFAULT_P_T
) -> list[GroundTruthCase]:
    """Label each box Intrusion iff its AoI overlap exceeds ``p_t``.

    Uses the runtime judgment, so labels and judgments agree by construction.
    """
    cfg = JudgeConfig(p_t=p_t)
    cases = [
        GroundTruthCase(box=box, intrusion=judge_intrusion(box, mask, cfg).intruding)
        for box in person_boxes
    ]
    logger.debug(
        "Labels fused",
        boxes=len(person_boxes),
        intrusions=sum(c.intrusion for c in cases),
        p_t=p_t,
    )
    return cases


def review_candidates(
    mask: BinaryMask, person_boxes: list[BBox], p_t: int = DEFAULT_P_T, band: float = REVIEW_BAND
) -> list[ReviewItem]:
    """Boxes whose overlap lies within ``band * p_t`` of the threshold."""
    margin = band * p_t
    items = []
    for box in person_boxes:
        overlap = bbox_mask_overlap(box, mask)
        if abs(overlap - p_t) <= margin:
            items.append(ReviewItem(box=box, overlap_pixels=overlap, intrusion=overlap > p_t))
    return items
