"""Pydantic models for evaluation configuration, counts and reports."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator

from pidkit.shared.models import GroundTruthCase, ScoredDetection

DEFAULT_RECALL_LEVELS = tuple(i / 10 for i in range(11))


class AccFormula(str, Enum):
    """Which PID_Acc numerator to use."""

    CORRECTED = "corrected"  # (tp + tn) / total
    LITERAL = "literal"  # (tp + fn) / total, as printed


class EvalConfig(BaseModel):
    """Thresholds of the PID metrics."""

    model_config = ConfigDict(frozen=True)

    iou_threshold: float = Field(default=0.5, gt=0.0, le=1.0, description="IoU > threshold")
    c_t: float = Field(default=0.8, ge=0.0, le=1.0, description="Confidence threshold")
    p_t: int = Field(default=20, ge=0, description="Overlap-pixel threshold")
    p_t_set: list[int] = Field(
        default_factory=lambda: [20], min_length=1, description="p_t values averaged by PID_mAP"
    )
    recall_levels: tuple[float, ...] = Field(default=DEFAULT_RECALL_LEVELS, min_length=1)
    acc_formula: AccFormula = Field(default=AccFormula.CORRECTED)

    @field_validator("p_t_set")
    @classmethod
    def _non_negative(cls, v: list[int]) -> list[int]:
        if any(p < 0 for p in v):
            raise ValueError("p_t values must be non-negative")
        return v

    @field_validator("recall_levels")
    @classmethod
    def _increasing(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if any(not 0.0 <= r <= 1.0 for r in v):
            raise ValueError("recall levels must lie in [0, 1]")
        if any(b <= a for a, b in zip(v, v[1:], strict=False)):
            raise ValueError("recall levels must be strictly increasing")
        return v

    @property
    def n_levels(self) -> int:
        return len(self.recall_levels)


class ConfusionCounts(BaseModel):
    """Case-level outcome counts; additive over frames."""

    model_config = ConfigDict(frozen=True)

    tp: int = Field(default=0, ge=0)
    fp: int = Field(default=0, ge=0)
    fn: int = Field(default=0, ge=0)
    tn: int = Field(default=0, ge=0)
    total: int = Field(default=0, ge=0, description="All ground-truth cases")

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            fn=self.fn + other.fn,
            tn=self.tn + other.tn,
            total=self.total + other.total,
        )

    @property
    def intrusion_cases(self) -> int:
        return self.tp + self.fn

    @property
    def recall(self) -> float | None:
        return self.tp / self.intrusion_cases if self.intrusion_cases else None

    @property
    def precision(self) -> float:
        # An operating point that flags nothing is treated as perfectly precise.
        flagged = self.tp + self.fp
        return self.tp / flagged if flagged else 1.0


class FrameEval(BaseModel):
    """Detections (with AoI overlaps) and ground truth of one frame."""

    frame_id: str = ""
    detections: list[ScoredDetection] = Field(default_factory=list)
    gts: list[GroundTruthCase] = Field(default_factory=list)


class PRPoint(BaseModel):
    """One operating point of the confidence sweep."""

    model_config = ConfigDict(frozen=True)

    recall: float
    precision: float
    confidence: float


class EvalReport(BaseModel):
    """All PID metrics for one evaluation run."""

    label: str = Field(default="pidkit", description="Model / run name")
    frames: int = Field(default=0, ge=0)
    p_t: int
    c_t: float
    acc_formula: AccFormula
    pid_ap: dict[int, float | None] = Field(description="PID_AP per overlap threshold")
    pid_map: float | None
    pid_acc: float | None
    counts: ConfusionCounts
    pr_curve: list[PRPoint] = Field(default_factory=list)
    crop_fraction: float | None = Field(
        default=None, description="Mean share of feature cells kept by cropping"
    )

    @field_validator("pid_map", "pid_acc", "crop_fraction")
    @classmethod
    def _unit_interval(cls, v: float | None) -> float | None:
        if v is not None and not 0.0 <= v <= 1.0:
            raise ValueError("rates must lie in [0, 1]")
        return v
