"""Parameter, MAC and receptive-field accounting for backbone and head variants."""

from pidkit.arch.layers import (
    ArchSpec,
    LayerKind,
    LayerSpec,
    concat,
    layer_flops,
    layer_params,
    model_flops,
    model_params,
    output_shape,
    receptive_field,
    separable_ratio,
)
from pidkit.arch.presets import (
    PRESETS,
    PUBLISHED_BACKBONE_PARAMS_M,
    RatioCandidate,
    backbone_rows,
    compression_ratio_candidates,
    get_preset,
    preset_variants,
)
from pidkit.arch.table import ArchRow, analyze, format_rows

__all__ = [
    "ArchRow",
    "ArchSpec",
    "LayerKind",
    "LayerSpec",
    "PRESETS",
    "PUBLISHED_BACKBONE_PARAMS_M",
    "RatioCandidate",
    "analyze",
    "backbone_rows",
    "compression_ratio_candidates",
    "concat",
    "format_rows",
    "get_preset",
    "layer_flops",
    "layer_params",
    "model_flops",
    "model_params",
    "output_shape",
    "receptive_field",
    "preset_variants",
    "separable_ratio",
]
