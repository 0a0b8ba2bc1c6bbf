"""PID_AP (interpolated over recall levels), PID_mAP and PID_Acc."""

from collections.abc import Sequence
from itertools import groupby

from pidkit.metrics.matching import Outcome, match_detections, match_frame
from pidkit.metrics.models import (
    AccFormula,
    ConfusionCounts,
    EvalConfig,
    EvalReport,
    FrameEval,
    PRPoint,
)
from pidkit.shared.errors import MetricError
from pidkit.shared.logging import get_logger

logger = get_logger(__name__)


def _intrusion_count(frames: Sequence[FrameEval]) -> int:
    return sum(1 for f in frames for g in f.gts if g.intrusion)


def operating_points(
    frames: Sequence[FrameEval], cfg: EvalConfig, p_t: int
) -> list[tuple[float, int, int]]:
    """(threshold confidence, tp, fp) for every prefix of the confidence-ranked detections.

    Sweeping the confidence gate over {0, 1} and every distinct detection confidence selects
    exactly these prefixes. Matching is greedy in rank order, so a detection's outcome never
    depends on lower-ranked detections and one matching pass per frame serves every threshold.
    """
    outcomes: list[tuple[float, Outcome]] = []
    for frame in frames:
        positive = [d for d in frame.detections if d.confidence > 0.0]
        match = match_frame(positive, frame.gts, cfg.iou_threshold, p_t)
        outcomes.extend((det.confidence, o) for det, o in match.ranked)
    outcomes.sort(key=lambda item: -item[0])

    points = [(1.0, 0, 0)]
    tp = fp = 0
    for conf, group in groupby(outcomes, key=lambda item: item[0]):
        for _, outcome in group:
            tp += outcome is Outcome.TP
            fp += outcome is Outcome.FP
        points.append((conf, tp, fp))
    return points


def pr_curve(frames: Sequence[FrameEval], cfg: EvalConfig, p_t: int | None = None) -> list[PRPoint]:
    """Recall/precision per operating point, confidence descending."""
    p_t = cfg.p_t if p_t is None else p_t
    intrusions = _intrusion_count(frames)
    if intrusions == 0:
        raise MetricError("recall is undefined without intrusion ground truth")
    curve = []
    for conf, tp, fp in operating_points(frames, cfg, p_t):
        precision = tp / (tp + fp) if tp + fp else 1.0
        curve.append(PRPoint(recall=tp / intrusions, precision=precision, confidence=conf))
    return curve


def pid_ap(frames: Sequence[FrameEval], cfg: EvalConfig, p_t: int | None = None) -> float:
    """Mean over recall levels r of the best precision at any operating point with recall >= r."""
    curve = pr_curve(frames, cfg, p_t)
    total = 0.0
    for level in cfg.recall_levels:
        reachable = [pt.precision for pt in curve if pt.recall >= level]
        total += max(reachable) if reachable else 0.0
    return total / cfg.n_levels


def pid_map(frames: Sequence[FrameEval], cfg: EvalConfig) -> float:
    """Mean PID_AP over ``cfg.p_t_set``."""
    if not cfg.p_t_set:
        raise MetricError("p_t_set must not be empty")
    aps = [pid_ap(frames, cfg, p) for p in cfg.p_t_set]
    return sum(aps) / len(aps)


def total_counts(frames: Sequence[FrameEval], cfg: EvalConfig) -> ConfusionCounts:
    """Counts at the fixed thresholds ``cfg.c_t`` / ``cfg.p_t``, summed over frames."""
    return sum(
        (match_detections(f.detections, f.gts, cfg) for f in frames),
        start=ConfusionCounts(),
    )


def accuracy_from_counts(counts: ConfusionCounts, formula: AccFormula) -> float:
    if counts.total == 0:
        raise MetricError("accuracy is undefined without ground truth")
    if formula is AccFormula.LITERAL:
        return (counts.tp + counts.fn) / counts.total
    return (counts.tp + counts.tn) / counts.total


def pid_acc(frames: Sequence[FrameEval], cfg: EvalConfig) -> float:
    """Case-level accuracy at the fixed thresholds."""
    return accuracy_from_counts(total_counts(frames, cfg), cfg.acc_formula)


def evaluate(
    frames: Sequence[FrameEval], cfg: EvalConfig, label: str = "pidkit"
) -> EvalReport:
    """Compute every metric; metrics undefined for this input are reported as None."""
    counts = total_counts(frames, cfg)

    ap_by_pt: dict[int, float | None] = {}
    for p in sorted({*cfg.p_t_set, cfg.p_t}):
        try:
            ap_by_pt[p] = pid_ap(frames, cfg, p)
        except MetricError:
            ap_by_pt[p] = None

    set_aps = [ap_by_pt[p] for p in cfg.p_t_set]
    map_value = None if any(a is None for a in set_aps) else sum(set_aps) / len(set_aps)  # type: ignore[arg-type]

    try:
        acc: float | None = accuracy_from_counts(counts, cfg.acc_formula)
    except MetricError:
        acc = None
    try:
        curve = pr_curve(frames, cfg)
    except MetricError:
        curve = []

    logger.info(
        "Evaluation complete",
        frames=len(frames),
        tp=counts.tp,
        fp=counts.fp,
        fn=counts.fn,
        tn=counts.tn,
        pid_map=map_value,
        pid_acc=acc,
    )
    return EvalReport(
        label=label,
        frames=len(frames),
        p_t=cfg.p_t,
        c_t=cfg.c_t,
        acc_formula=cfg.acc_formula,
        pid_ap=ap_by_pt,
        pid_map=map_value,
        pid_acc=acc,
        counts=counts,
        pr_curve=curve,
    )
