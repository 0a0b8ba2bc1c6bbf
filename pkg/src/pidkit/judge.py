"""Masking-based intrusion judgment: detections + AoI mask -> per-pedestrian verdicts."""

from pydantic import BaseModel, ConfigDict, Field

from pidkit.geometry.boxes import bbox_mask_overlap
from pidkit.geometry.mask import BinaryMask
from pidkit.shared.logging import get_logger
from pidkit.shared.models import BBox, Detection, Verdict

logger = get_logger(__name__)

DEFAULT_P_T = 20
DEFAULT_C_T = 0.8


class JudgeConfig(BaseModel):
    """Thresholds of the runtime intrusion judgment."""

    model_config = ConfigDict(frozen=True)

    p_t: int = Field(default=DEFAULT_P_T, ge=0, description="Overlap-pixel threshold")
    c_t: float = Field(default=DEFAULT_C_T, ge=0.0, le=1.0, description="Confidence threshold")


def is_intruding(overlap_pixels: int, p_t: int) -> bool:
    """Shared labelling rule: strictly more than ``p_t`` overlapping pixels."""
    return overlap_pixels > p_t


def judge_intrusion(
    box: BBox, mask: BinaryMask, cfg: JudgeConfig, confidence: float = 1.0
) -> Verdict:
    """Judge one box against the AoI mask."""
    overlap = bbox_mask_overlap(box, mask)
    return Verdict(
        detection=Detection(box=box, confidence=confidence),
        overlap_pixels=overlap,
        intruding=is_intruding(overlap, cfg.p_t),
    )


def gate_detections(detections: list[Detection], c_t: float) -> list[Detection]:
    """Keep detections eligible for judgment (confidence >= c_t), order-preserving."""
    return [d for d in detections if d.confidence >= c_t]


def annotate_frame(
    detections: list[Detection], mask: BinaryMask, cfg: JudgeConfig
) -> list[Verdict]:
    """Judge every detection that passes the confidence gate, in input order."""
    kept = gate_detections(detections, cfg.c_t)
    verdicts = [judge_intrusion(d.box, mask, cfg, d.confidence) for d in kept]
    logger.debug(
        "Frame annotated",
        detections=len(detections),
        judged=len(verdicts),
        intruding=sum(v.intruding for v in verdicts),
    )
    return verdicts
