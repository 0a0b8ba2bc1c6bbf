"""Synthetic scenes, the oracle detector and the end-to-end pipeline."""

from pidkit.pipeline.oracle import DetectorNoise, oracle_detect
from pidkit.pipeline.report import (
    REPORT_FORMATS,
    emit_pr_curve,
    emit_report,
    parse_report_csv,
    parse_report_records,
)
from pidkit.pipeline.runner import (
    PipelineConfig,
    PipelineMode,
    process_scene,
    run_pipeline,
    run_simulation,
    scene_seeds,
)
from pidkit.pipeline.scene import (
    Scene,
    SceneParams,
    build_scene,
    generate_boundary_scene,
    generate_scene,
)

__all__ = [
    "REPORT_FORMATS",
    "DetectorNoise",
    "PipelineConfig",
    "PipelineMode",
    "Scene",
    "SceneParams",
    "build_scene",
    "emit_pr_curve",
    "emit_report",
    "generate_boundary_scene",
    "generate_scene",
    "oracle_detect",
    "parse_report_csv",
    "parse_report_records",
    "process_scene",
    "run_pipeline",
    "run_simulation",
    "scene_seeds",
]
