"""The PID pipeline on synthetic scenes: crop, detect, suppress, judge and evaluate."""

import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from pidkit.detection.nms import NmsConfig, filter_by_confidence, nms
from pidkit.geometry.boxes import bbox_mask_overlap
from pidkit.geometry.crop import CropConfig, crop_region
from pidkit.judge import JudgeConfig, annotate_frame
from pidkit.metrics.ap import evaluate
from pidkit.metrics.models import EvalConfig, EvalReport, FrameEval
from pidkit.pipeline.oracle import DetectorNoise, oracle_detect
from pidkit.pipeline.scene import Scene, SceneParams, generate_boundary_scene, generate_scene
from pidkit.shared.logging import bind_frame_id, clear_context, get_logger
from pidkit.shared.models import Rect, ScoredDetection, Verdict

logger = get_logger(__name__)


class PipelineMode(str, Enum):
    FCM = "fcm"
    FULL_FRAME = "full-frame"


class PipelineConfig(BaseModel):
    """Composed configuration of one pipeline run."""

    model_config = ConfigDict(frozen=True)

    crop: CropConfig = Field(default_factory=CropConfig)
    stride: int = Field(default=16, ge=1, description="Feature-map downsampling factor")
    judge: JudgeConfig = Field(default_factory=JudgeConfig)
    eval: EvalConfig = Field(default_factory=EvalConfig)
    nms: NmsConfig = Field(default_factory=NmsConfig)
    score_threshold: float = Field(
        default=0.0, ge=0.0, le=1.0, description="Confidence filter applied before NMS"
    )
    mode: PipelineMode = PipelineMode.FCM


@dataclass(frozen=True)
class SceneResult:
    verdicts: list[Verdict]
    frame: FrameEval
    crop_fraction: float


def visible_region(scene: Scene, cfg: PipelineConfig) -> tuple[Rect | None, float]:
    """Pixel region handed to the detector and the share of feature cells it keeps."""
    if cfg.mode is PipelineMode.FULL_FRAME:
        return Rect.of(0, 0, scene.width, scene.height), 1.0
    region, fr = crop_region(scene.mask, cfg.crop, cfg.stride)
    if fr is not None:
        return region, fr.cells / fr.grid_cells
    return region, 0.0 if region is None else 1.0


def process_scene(scene: Scene, cfg: PipelineConfig, noise: DetectorNoise) -> SceneResult:
    bind_frame_id(scene.frame_id)
    try:
        region, fraction = visible_region(scene, cfg)
        detections = oracle_detect(scene, noise, region)
        detections = nms(filter_by_confidence(detections, cfg.score_threshold), cfg.nms)
        verdicts = annotate_frame(detections, scene.mask, cfg.judge)
        scored = [
            ScoredDetection(detection=d, overlap_pixels=bbox_mask_overlap(d.box, scene.mask))
            for d in detections
        ]
        logger.debug(
            "Scene processed",
            region=None if region is None else region.as_tuple(),
            detections=len(detections),
            verdicts=len(verdicts),
        )
    finally:
        clear_context()
    frame = FrameEval(frame_id=scene.frame_id, detections=scored, gts=scene.gt_cases)
    return SceneResult(verdicts=verdicts, frame=frame, crop_fraction=fraction)


def run_pipeline(
    scene: Scene, cfg: PipelineConfig, noise: DetectorNoise | None = None
) -> tuple[list[Verdict], EvalReport]:
    """Run one scene end to end."""
    result = process_scene(scene, cfg, noise or DetectorNoise())
    report = evaluate([result.frame], cfg.eval, label=cfg.mode.value)
    return result.verdicts, report.model_copy(update={"crop_fraction": result.crop_fraction})


def scene_seeds(root_seed: int, count: int) -> list[int]:
    """Per-scene seeds split from one root seed."""
    return [int(s) for s in np.random.SeedSequence(root_seed).generate_state(count)]


def run_simulation(
    scenes: int,
    seed: int,
    cfg: PipelineConfig,
    noise: DetectorNoise | None = None,
    params: SceneParams | None = None,
    workers: int = 1,
    boundary: bool = False,
) -> EvalReport:
    """Generate and process ``scenes`` frames, pooling them into one report.

    Scenes are independent and may run on a thread pool; results are gathered in seed order,
    so serial and parallel runs produce identical reports.
    """
    noise = noise or DetectorNoise()
    params = params or SceneParams()
    seeds = scene_seeds(seed, scenes)

    def one(scene_seed: int) -> SceneResult:
        if boundary:
            scene = generate_boundary_scene(scene_seed, params, cfg.stride)
        else:
            scene = generate_scene(params, scene_seed)
        return process_scene(scene, cfg, noise)

    started = time.perf_counter()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, seeds))
    else:
        results = [one(s) for s in seeds]
    elapsed = time.perf_counter() - started

    report = pooled_report(results, cfg)
    logger.info(
        "Simulation complete",
        mode=cfg.mode.value,
        scenes=scenes,
        workers=workers,
        noiseless=noise.noiseless,
        elapsed_s=round(elapsed, 3),
        crop_fraction=report.crop_fraction,
    )
    return report


def pooled_report(results: Sequence[SceneResult], cfg: PipelineConfig) -> EvalReport:
    report = evaluate([r.frame for r in results], cfg.eval, label=cfg.mode.value)
    fraction = sum(r.crop_fraction for r in results) / len(results) if results else None
    return report.model_copy(update={"crop_fraction": fraction})
