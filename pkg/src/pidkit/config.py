"""Settings for the pidkit CLI: defaults, PIDKIT_* environment, config file, flags."""

from pathlib import Path
from typing import Any

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from pidkit.detection.nms import NmsConfig
from pidkit.geometry.crop import CropConfig, EmptyAoiPolicy
from pidkit.judge import DEFAULT_C_T, DEFAULT_P_T, JudgeConfig
from pidkit.metrics.models import AccFormula, EvalConfig
from pidkit.pipeline.runner import PipelineConfig, PipelineMode
from pidkit.pipeline.scene import SceneParams
from pidkit.shared.errors import PidkitError


class ConfigFileError(PidkitError, ValueError):
    """Config file is unreadable or not a single mapping."""


class PidkitSettings(BaseSettings):
    """Every tunable of the toolkit."""

    model_config = SettingsConfigDict(
        env_prefix="PIDKIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Logging
    log_level: str = Field(default="INFO", description="Logging level (DEBUG, INFO, WARNING, ERROR)")
    json_logs: bool = Field(default=False, description="Render log events as JSON lines")

    # Feature cropping
    alpha: float = Field(default=1.2, ge=1.0, description="MBR extension coefficient")
    symmetric: bool = Field(default=False, description="Also extend the min side of the MBR")
    empty_aoi_policy: EmptyAoiPolicy = Field(default=EmptyAoiPolicy.SKIP_DETECTION)
    stride: int = Field(default=16, ge=1, description="Feature-map downsampling factor")

    # Judgment and metrics
    p_t: int = Field(default=DEFAULT_P_T, ge=0, description="Overlap-pixel threshold")
    c_t: float = Field(default=DEFAULT_C_T, ge=0.0, le=1.0, description="Confidence threshold")
    iou_threshold: float = Field(default=0.5, gt=0.0, le=1.0)
    p_t_set: list[int] = Field(default_factory=lambda: [DEFAULT_P_T], min_length=1)
    acc_formula: AccFormula = Field(default=AccFormula.CORRECTED)

    # Detection plumbing
    nms_iou: float = Field(default=0.7, gt=0.0, le=1.0)
    nms_max_keep: int | None = Field(default=None, ge=1)
    score_threshold: float = Field(default=0.0, ge=0.0, le=1.0)

    # Simulation
    image_width: int = Field(default=1024, gt=0)
    image_height: int = Field(default=512, gt=0)
    workers: int = Field(default=1, ge=1)

    def crop_config(self) -> CropConfig:
        return CropConfig(
            alpha=self.alpha, symmetric=self.symmetric, empty_aoi_policy=self.empty_aoi_policy
        )

    def judge_config(self) -> JudgeConfig:
        return JudgeConfig(p_t=self.p_t, c_t=self.c_t)

    def eval_config(self) -> EvalConfig:
        return EvalConfig(
            iou_threshold=self.iou_threshold,
            c_t=self.c_t,
            p_t=self.p_t,
            p_t_set=self.p_t_set,
            acc_formula=self.acc_formula,
        )

    def nms_config(self) -> NmsConfig:
        return NmsConfig(iou_threshold=self.nms_iou, max_keep=self.nms_max_keep)

    def scene_params(self) -> SceneParams:
        return SceneParams(width=self.image_width, height=self.image_height, p_t=self.p_t)

    def pipeline_config(self, mode: PipelineMode | str = PipelineMode.FCM) -> PipelineConfig:
        """Compose the per-stage configs for one pipeline run."""
        return PipelineConfig(
            crop=self.crop_config(),
            stride=self.stride,
            judge=self.judge_config(),
            eval=self.eval_config(),
            nms=self.nms_config(),
            score_threshold=self.score_threshold,
            mode=PipelineMode(mode),
        )


def load_config_file(path: Path | str | None) -> dict[str, Any]:
    """Read settings from a YAML (or JSON) mapping; a missing path yields no settings."""
    if path is None:
        return {}
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigFileError(f"cannot read config file {path}: {e.strerror}") from e
    except UnicodeDecodeError as e:
        raise ConfigFileError(f"config file {path} is not UTF-8: {e.reason}") from e
    except yaml.YAMLError as e:
        raise ConfigFileError(f"config file {path} is not valid YAML: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigFileError(f"config file {path} must hold a single mapping")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def load_settings(config_file: Path | str | None = None, **overrides: Any) -> PidkitSettings:
    """Flags override the config file, which overrides PIDKIT_* variables and defaults."""
    values = load_config_file(config_file)
    values.update({k: v for k, v in overrides.items() if v is not None})
    return PidkitSettings(**values)
