"""PID evaluation metrics."""

from pidkit.metrics.ap import evaluate, pid_acc, pid_ap, pid_map, pr_curve, total_counts
from pidkit.metrics.matching import match_detections
from pidkit.metrics.models import (
    AccFormula,
    ConfusionCounts,
    EvalConfig,
    EvalReport,
    FrameEval,
    PRPoint,
)

__all__ = [
    "AccFormula",
    "ConfusionCounts",
    "EvalConfig",
    "EvalReport",
    "FrameEval",
    "PRPoint",
    "evaluate",
    "match_detections",
    "pid_acc",
    "pid_ap",
    "pid_map",
    "pr_curve",
    "total_counts",
]
