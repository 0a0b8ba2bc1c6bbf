"""Detection to ground-truth matching under the strict intrusion true-positive rule."""

from dataclasses import dataclass
from enum import Enum

from pidkit.detection.nms import rank_key
from pidkit.geometry.boxes import bbox_iou
from pidkit.judge import is_intruding
from pidkit.metrics.models import ConfusionCounts, EvalConfig
from pidkit.shared.models import GroundTruthCase, ScoredDetection


class Outcome(str, Enum):
    TP = "tp"
    FP = "fp"
    NONE = "none"


@dataclass(frozen=True)
class FrameMatch:
    """Per-detection outcomes (in rank order) and per-gt flags of one frame."""

    ranked: list[tuple[ScoredDetection, Outcome]]
    false_flagged: list[bool]


def match_frame(
    dets: list[ScoredDetection],
    gts: list[GroundTruthCase],
    iou_threshold: float,
    p_t: int,
) -> FrameMatch:
    """Greedy one-to-one matching, best detection first.

    Each detection takes the unmatched ground truth with the highest IoU >= iou_threshold.
    A matched detection is a true positive iff the gt is an intrusion, IoU > iou_threshold and
    the detection is flagged (overlap > p_t). Any other flagged detection is a false positive.
    The caller applies the confidence gate.
    """
    taken = [False] * len(gts)
    false_flagged = [False] * len(gts)
    ranked: list[tuple[ScoredDetection, Outcome]] = []

    for det in sorted(dets, key=lambda d: rank_key(d.detection)):
        best_j, best_iou = -1, -1.0
        for j, gt in enumerate(gts):
            if taken[j]:
                continue
            iou = bbox_iou(det.box, gt.box)
            if iou >= iou_threshold and iou > best_iou:
                best_j, best_iou = j, iou

        flagged = is_intruding(det.overlap_pixels, p_t)
        outcome = Outcome.NONE
        if best_j >= 0:
            taken[best_j] = True
            gt = gts[best_j]
            if flagged and gt.intrusion and best_iou > iou_threshold:
                outcome = Outcome.TP
            elif flagged:
                outcome = Outcome.FP
                if not gt.intrusion:
                    false_flagged[best_j] = True
        elif flagged:
            outcome = Outcome.FP
        ranked.append((det, outcome))

    return FrameMatch(ranked=ranked, false_flagged=false_flagged)


def match_detections(
    dets: list[ScoredDetection],
    gts: list[GroundTruthCase],
    cfg: EvalConfig,
    p_t: int | None = None,
) -> ConfusionCounts:
    """Confusion counts of one frame at confidence threshold ``cfg.c_t`` (strict >)."""
    p_t = cfg.p_t if p_t is None else p_t
    gated = [d for d in dets if d.confidence > cfg.c_t]
    match = match_frame(gated, gts, cfg.iou_threshold, p_t)

    tp = sum(1 for _, o in match.ranked if o is Outcome.TP)
    fp = sum(1 for _, o in match.ranked if o is Outcome.FP)
    intrusions = sum(1 for g in gts if g.intrusion)
    tn = sum(
        1 for g, flagged in zip(gts, match.false_flagged, strict=True)
        if not g.intrusion and not flagged
    )
    return ConfusionCounts(tp=tp, fp=fp, fn=intrusions - tp, tn=tn, total=len(gts))
