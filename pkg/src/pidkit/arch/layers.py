"""Symbolic layer descriptions with parameter, MAC and receptive-field accounting."""

from __future__ import annotations

from collections.abc import Iterator
from enum import Enum
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field

from pidkit.shared.errors import ArchSpecError


class LayerKind(str, Enum):
    CONV = "conv"
    DEPTHWISE = "depthwise-conv"
    POINTWISE = "pointwise-conv"
    FC = "fully-connected"
    BN = "batch-norm"
    POOL = "pooling"


class LayerSpec(BaseModel):
    """One layer. ``side`` names a parallel path (residual projection, prediction head).

    Consecutive layers with the same side name chain among themselves, starting from the
    main-path tensor current at their first appearance; they never change the main path.
    """

    model_config = ConfigDict(frozen=True)

    kind: LayerKind
    in_ch: int = Field(gt=0)
    out_ch: int = Field(gt=0)
    kernel: int = Field(default=1, ge=1)
    stride: int = Field(default=1, ge=1)
    padding: int | None = Field(default=None, ge=0, description="Defaults to kernel // 2")
    has_bias: bool | None = Field(default=None, description="Defaults to True for FC only")
    global_pool: bool = False
    side: str | None = None
    name: str = ""

    @property
    def pad(self) -> int:
        return self.kernel // 2 if self.padding is None else self.padding

    @property
    def bias(self) -> bool:
        if self.has_bias is None:
            return self.kind is LayerKind.FC
        return self.has_bias


def _check_channels(layer: LayerSpec) -> None:
    same_channels = (LayerKind.DEPTHWISE, LayerKind.BN, LayerKind.POOL)
    if layer.kind in same_channels and layer.in_ch != layer.out_ch:
        raise ArchSpecError(
            f"{layer.kind.value} layer {layer.name!r} needs in_ch == out_ch, "
            f"got {layer.in_ch} -> {layer.out_ch}"
        )
    if layer.kind is LayerKind.POINTWISE and layer.kernel != 1:
        raise ArchSpecError(f"pointwise layer {layer.name!r} must have kernel 1")


def layer_params(layer: LayerSpec) -> int:
    """Learnable parameter count (batch-norm: scale and shift only)."""
    _check_channels(layer)
    k2, cin, cout = layer.kernel**2, layer.in_ch, layer.out_ch
    match layer.kind:
        case LayerKind.CONV:
            return k2 * cin * cout + (cout if layer.bias else 0)
        case LayerKind.DEPTHWISE:
            return k2 * cin + (cin if layer.bias else 0)
        case LayerKind.POINTWISE | LayerKind.FC:
            return cin * cout + (cout if layer.bias else 0)
        case LayerKind.BN:
            return 2 * cout
        case LayerKind.POOL:
            return 0
    raise ArchSpecError(f"unknown layer kind {layer.kind}")


def output_size(layer: LayerSpec, in_h: int, in_w: int) -> tuple[int, int]:
    if layer.kind is LayerKind.FC or layer.global_pool:
        return 1, 1
    if layer.kind is LayerKind.BN:
        return in_h, in_w
    out_h = (in_h + 2 * layer.pad - layer.kernel) // layer.stride + 1
    out_w = (in_w + 2 * layer.pad - layer.kernel) // layer.stride + 1
    return out_h, out_w


def layer_flops(layer: LayerSpec, in_h: int, in_w: int) -> int:
    """Multiply-accumulate count for one forward pass (biases, BN and pooling excluded)."""
    out_h, out_w = output_size(layer, in_h, in_w)
    positions = out_h * out_w
    k2 = layer.kernel**2
    match layer.kind:
        case LayerKind.CONV:
            return k2 * layer.in_ch * layer.out_ch * positions
        case LayerKind.DEPTHWISE:
            return k2 * layer.in_ch * positions
        case LayerKind.POINTWISE:
            return layer.in_ch * layer.out_ch * positions
        case LayerKind.FC:
            return layer.in_ch * layer.out_ch
        case _:
            return 0


class ArchSpec(BaseModel):
    """Ordered layers fed by ``input`` (channels, height, width), plus parallel branches.

    Branches are complete sub-networks fed by the same input (e.g. spatial and context path).
    """

    name: str
    layers: list[LayerSpec] = Field(default_factory=list)
    input: tuple[int, int, int] = (3, 512, 1024)
    branches: list[ArchSpec] = Field(default_factory=list)
    skip_connections: bool = Field(default=False, description="Residual additions on the main path")
    family: str = "custom"

    @property
    def sequential(self) -> bool:
        return (
            not self.branches
            and not self.skip_connections
            and all(layer.side is None for layer in self.layers)
        )


def walk(arch: ArchSpec) -> Iterator[tuple[LayerSpec, int, int]]:
    """Yield (layer, in_h, in_w) for every layer of the spec, checking channel chaining."""
    channels, height, width = arch.input
    sides: dict[str, tuple[int, int, int]] = {}

    for index, layer in enumerate(arch.layers):
        if layer.side is not None:
            c, h, w = sides.get(layer.side, (channels, height, width))
        else:
            c, h, w = channels, height, width

        expected = c * h * w if layer.kind is LayerKind.FC else c
        if layer.in_ch != expected:
            raise ArchSpecError(
                f"{arch.name}: layer {index} ({layer.name or layer.kind.value}) expects "
                f"{layer.in_ch} input channels, gets {expected}"
            )
        out_h, out_w = output_size(layer, h, w)
        if out_h <= 0 or out_w <= 0:
            raise ArchSpecError(f"{arch.name}: layer {index} shrinks the map to nothing")
        yield layer, h, w

        if layer.side is not None:
            sides[layer.side] = (layer.out_ch, out_h, out_w)
        else:
            channels, height, width = layer.out_ch, out_h, out_w
            sides.clear()


def output_shape(arch: ArchSpec) -> tuple[int, int, int]:
    """Main-path output (channels, height, width)."""
    shape = arch.input
    for layer, h, w in walk(arch):
        if layer.side is None:
            shape = (layer.out_ch, *output_size(layer, h, w))
    return shape


def model_params(arch: ArchSpec) -> int:
    """Total parameters of layers and branches."""
    own = sum(layer_params(layer) for layer, _, _ in walk(arch))
    return own + sum(model_params(b) for b in arch.branches)


def model_flops(arch: ArchSpec) -> int:
    """Total MACs at the spec's input size."""
    own = sum(layer_flops(layer, h, w) for layer, h, w in walk(arch))
    return own + sum(model_flops(b) for b in arch.branches)


def receptive_field(arch: ArchSpec) -> tuple[int, int]:
    """(receptive field, jump) of a sequential spec: rf += (k - 1) * jump; jump *= s."""
    if not arch.sequential:
        raise ArchSpecError(f"{arch.name} is branched; analyze each path separately")
    rf, jump = 1, 1
    for layer in arch.layers:
        if layer.kind is LayerKind.FC or layer.global_pool:
            raise ArchSpecError(f"{arch.name}: layer {layer.name!r} sees the whole map")
        if layer.kind is LayerKind.BN:
            continue
        rf += (layer.kernel - 1) * jump
        jump *= layer.stride
    return rf, jump


def concat(name: str, first: ArchSpec, second: ArchSpec) -> ArchSpec:
    """Append ``second``'s layers after ``first`` (second's input is ignored)."""
    return ArchSpec(
        name=name,
        layers=[*first.layers, *second.layers],
        input=first.input,
        branches=[*first.branches, *second.branches],
        skip_connections=first.skip_connections or second.skip_connections,
        family=first.family,
    )


def separable_ratio(kernel: int, out_ch: int) -> Fraction:
    """Depthwise-separable over standard convolution parameters (bias-free): 1/out + 1/k^2."""
    return Fraction(1, out_ch) + Fraction(1, kernel * kernel)
