"""Preset specs: spatial-path variants, residual context paths, backbone rows, RPN and R-CNN heads.

Conv layers followed by batch-norm carry no bias. Prediction layers (RPN, R-CNN) carry biases.
"""

from collections.abc import Callable
from fractions import Fraction
from functools import partial

from pydantic import BaseModel, ConfigDict

from pidkit.arch.layers import ArchSpec, LayerKind, LayerSpec, model_params, separable_ratio
from pidkit.shared.errors import ArchSpecError

Shape = tuple[int, int, int]

FRAME_INPUT: Shape = (3, 512, 1024)
CLASSIFIER_INPUT: Shape = (3, 224, 224)
RPN_INPUT: Shape = (256, 32, 64)
ROI_INPUT: Shape = (256, 7, 7)

SP_WIDTH = 64
RPN_ANCHORS_BASELINE = 9
RPN_ANCHORS_COMPRESSED = 25
COMPACT_HEAD_WIDTH = 2048
BASELINE_HEAD_WIDTH = 4096
NUM_CLASSES = 2  # pedestrian, background

# Params(M) column of the published backbone ablation.
PUBLISHED_BACKBONE_PARAMS_M: dict[str, float] = {
    "sp+cp": 12.5,
    "sp+cp+5x5": 14.1,
    "sp+cp+5x5dw": 11.7,
    "sp+cp+5x5dw+add-channel": 12.2,
}


def _conv(cin: int, cout: int, k: int, s: int = 1, side: str | None = None, **kw: object) -> LayerSpec:
    return LayerSpec(kind=LayerKind.CONV, in_ch=cin, out_ch=cout, kernel=k, stride=s, side=side, **kw)  # type: ignore[arg-type]


def _bn(c: int, side: str | None = None) -> LayerSpec:
    return LayerSpec(kind=LayerKind.BN, in_ch=c, out_ch=c, side=side)


def _pw(cin: int, cout: int, side: str | None = None, bias: bool = False) -> LayerSpec:
    return LayerSpec(kind=LayerKind.POINTWISE, in_ch=cin, out_ch=cout, side=side, has_bias=bias)


def _dw(c: int, k: int, s: int = 1, bias: bool = False) -> LayerSpec:
    return LayerSpec(kind=LayerKind.DEPTHWISE, in_ch=c, out_ch=c, kernel=k, stride=s, has_bias=bias)


def _fc(cin: int, cout: int, side: str | None = None) -> LayerSpec:
    return LayerSpec(kind=LayerKind.FC, in_ch=cin, out_ch=cout, side=side)


# Spatial path -----------------------------------------------------------------


def spatial_path(
    name: str,
    kernel: int = 3,
    separable: bool = False,
    width: int = SP_WIDTH,
    input: Shape | None = None,
) -> ArchSpec:
    """Three stride-2 blocks; standard conv+BN or depthwise+BN+pointwise+BN."""
    input = input or FRAME_INPUT
    layers: list[LayerSpec] = []
    cin = input[0]
    for _ in range(3):
        if separable:
            layers += [_dw(cin, kernel, 2), _bn(cin), _pw(cin, width), _bn(width)]
        else:
            layers += [_conv(cin, width, kernel, 2), _bn(width)]
        cin = width
    return ArchSpec(name=name, layers=layers, input=input, family="spatial-path")


# Residual networks ------------------------------------------------------------


def _stem(cin: int) -> list[LayerSpec]:
    return [
        _conv(cin, 64, 7, 2, padding=3, name="stem"),
        _bn(64),
        LayerSpec(kind=LayerKind.POOL, in_ch=64, out_ch=64, kernel=3, stride=2, padding=1),
    ]


def _downsample(cin: int, cout: int, stride: int) -> list[LayerSpec]:
    return [_conv(cin, cout, 1, stride, side="downsample"), _bn(cout, side="downsample")]


def _basic_block(cin: int, cout: int, stride: int) -> list[LayerSpec]:
    layers = _downsample(cin, cout, stride) if stride != 1 or cin != cout else []
    return layers + [_conv(cin, cout, 3, stride), _bn(cout), _conv(cout, cout, 3), _bn(cout)]


def _bottleneck(cin: int, mid: int, stride: int) -> list[LayerSpec]:
    cout = mid * 4
    layers = _downsample(cin, cout, stride) if stride != 1 or cin != cout else []
    return layers + [
        _conv(cin, mid, 1),
        _bn(mid),
        _conv(mid, mid, 3, stride),
        _bn(mid),
        _conv(mid, cout, 1),
        _bn(cout),
    ]


def _classifier(c: int, classes: int = 1000) -> list[LayerSpec]:
    return [
        LayerSpec(kind=LayerKind.POOL, in_ch=c, out_ch=c, global_pool=True, name="avgpool"),
        _fc(c, classes),
    ]


def resnet(
    name: str, depths: tuple[int, ...], bottleneck: bool, classifier: bool, input: Shape | None = None
) -> ArchSpec:
    """Standard residual network; the context-path placeholder when built without classifier."""
    input = input or (CLASSIFIER_INPUT if classifier else FRAME_INPUT)
    layers = _stem(input[0])
    cin = 64
    for stage, depth in enumerate(depths):
        width = 64 * 2**stage
        for block in range(depth):
            stride = 2 if stage > 0 and block == 0 else 1
            if bottleneck:
                layers += _bottleneck(cin, width, stride)
                cin = width * 4
            else:
                layers += _basic_block(cin, width, stride)
                cin = width
    if classifier:
        layers += _classifier(cin)
    return ArchSpec(
        name=name, layers=layers, input=input, skip_connections=True, family="context-path"
    )


# Backbone rows ----------------------------------------------------------------


def backbone(name: str, sp_preset: str, input: Shape | None = None) -> ArchSpec:
    """Spatial path and resnet18 context path side by side on the same frame."""
    input = input or FRAME_INPUT
    return ArchSpec(
        name=name,
        input=input,
        branches=[get_preset(sp_preset, input), get_preset("resnet18-backbone", input)],
        family="backbone",
    )


# Detection heads --------------------------------------------------------------


def rpn(name: str, compressed: bool, input: Shape | None = None) -> ArchSpec:
    """Shared conv then parallel objectness (2A) and box (4A) predictors."""
    input = input or RPN_INPUT
    c = input[0]
    if compressed:
        anchors = RPN_ANCHORS_COMPRESSED
        trunk = [_dw(c, 5, bias=True), _pw(c, c, bias=True)]
    else:
        anchors = RPN_ANCHORS_BASELINE
        trunk = [_conv(c, c, 3, has_bias=True)]
    return ArchSpec(
        name=name,
        input=input,
        family="rpn",
        layers=[
            *trunk,
            _pw(c, 2 * anchors, side="cls", bias=True),
            _pw(c, 4 * anchors, side="reg", bias=True),
        ],
    )


def rcnn_head(name: str, compact: bool, input: Shape | None = None) -> ArchSpec:
    """Baseline: two wide FC over the flattened RoI. Compact: a single narrower FC."""
    input = input or ROI_INPUT
    c, h, w = input
    if compact:
        width = COMPACT_HEAD_WIDTH
        trunk = [_fc(c * h * w, width)]
    else:
        width = BASELINE_HEAD_WIDTH
        trunk = [_fc(c * h * w, width), _fc(width, width)]
    return ArchSpec(
        name=name,
        input=input,
        family="rcnn-head",
        layers=[*trunk, _fc(width, NUM_CLASSES, side="cls"), _fc(width, 4 * NUM_CLASSES, side="reg")],
    )


PresetBuilder = Callable[..., ArchSpec]

PRESETS: dict[str, PresetBuilder] = {
    "sp": partial(spatial_path, "sp"),
    "sp-5x5": partial(spatial_path, "sp-5x5", 5),
    "sp-5x5-dw": partial(spatial_path, "sp-5x5-dw", 5, True),
    "sp-5x5-dw-wide": partial(spatial_path, "sp-5x5-dw-wide", 5, True, 2 * SP_WIDTH),
    "resnet18": partial(resnet, "resnet18", (2, 2, 2, 2), False, True),
    "resnet18-backbone": partial(resnet, "resnet18-backbone", (2, 2, 2, 2), False, False),
    "resnet101": partial(resnet, "resnet101", (3, 4, 23, 3), True, True),
    "resnet101-backbone": partial(resnet, "resnet101-backbone", (3, 4, 23, 3), True, False),
    "sp+cp": partial(backbone, "sp+cp", "sp"),
    "sp+cp+5x5": partial(backbone, "sp+cp+5x5", "sp-5x5"),
    "sp+cp+5x5dw": partial(backbone, "sp+cp+5x5dw", "sp-5x5-dw"),
    "sp+cp+5x5dw+add-channel": partial(backbone, "sp+cp+5x5dw+add-channel", "sp-5x5-dw-wide"),
    "rpn-baseline": partial(rpn, "rpn-baseline", False),
    "rpn-compressed": partial(rpn, "rpn-compressed", True),
    "rcnn-head-baseline": partial(rcnn_head, "rcnn-head-baseline", False),
    "rcnn-head-compact": partial(rcnn_head, "rcnn-head-compact", True),
}


def get_preset(name: str, input: Shape | None = None) -> ArchSpec:
    """Build a preset, optionally at a different input shape."""
    try:
        builder = PRESETS[name]
    except KeyError:
        raise ArchSpecError(
            f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"
        ) from None
    return builder(input=input)


def preset_variants() -> list[ArchSpec]:
    """Every preset at its default input, in registry order."""
    return [get_preset(name) for name in PRESETS]


def backbone_rows() -> list[ArchSpec]:
    return [get_preset(name) for name in PUBLISHED_BACKBONE_PARAMS_M]


class RatioCandidate(BaseModel):
    """One reading of the "about 1/9" spatial-path reduction."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    value: Fraction

    @property
    def inverse(self) -> float:
        return float(1 / self.value)


def compression_ratio_candidates(channels: int = SP_WIDTH, kernel: int = 5) -> list[RatioCandidate]:
    """Parameter ratios under each counting convention (per layer and per spatial path)."""
    c, k2 = channels, kernel * kernel
    sp = model_params(get_preset("sp"))
    sp_k = model_params(get_preset("sp-5x5"))
    sp_dw = model_params(get_preset("sp-5x5-dw"))
    sp_wide = model_params(get_preset("sp-5x5-dw-wide"))
    return [
        RatioCandidate(name=f"separable {kernel}x{kernel} / standard {kernel}x{kernel} layer",
                       value=separable_ratio(kernel, c)),
        RatioCandidate(name=f"separable {kernel}x{kernel} / standard 3x3 layer",
                       value=Fraction(k2 * c + c * c, 9 * c * c)),
        RatioCandidate(name=f"depthwise {kernel}x{kernel} / standard {kernel}x{kernel} layer",
                       value=Fraction(1, c)),
        RatioCandidate(name=f"depthwise {kernel}x{kernel} / standard 3x3 layer",
                       value=Fraction(k2, 9 * c)),
        RatioCandidate(name="sp-5x5-dw / sp-5x5 path", value=Fraction(sp_dw, sp_k)),
        RatioCandidate(name="sp-5x5-dw / sp path", value=Fraction(sp_dw, sp)),
        RatioCandidate(name="sp-5x5-dw-wide / sp-5x5 path", value=Fraction(sp_wide, sp_k)),
    ]
