"""Tests for architecture parameter, MAC and receptive-field accounting."""

from fractions import Fraction

import numpy as np
import pytest

from pidkit.arch import (
    ArchSpec,
    LayerKind,
    LayerSpec,
    analyze,
    compression_ratio_candidates,
    concat,
    format_rows,
    get_preset,
    layer_flops,
    layer_params,
    model_flops,
    model_params,
    output_shape,
    preset_variants,
    receptive_field,
    separable_ratio,
)
from pidkit.arch.presets import (
    COMPACT_HEAD_WIDTH,
    PRESETS,
    PUBLISHED_BACKBONE_PARAMS_M,
    backbone_rows,
)
from pidkit.shared.errors import ArchSpecError, ReportFormatError


def conv(cin: int, cout: int, k: int = 3, s: int = 1, bias: bool = False) -> LayerSpec:
    return LayerSpec(kind=LayerKind.CONV, in_ch=cin, out_ch=cout, kernel=k, stride=s, has_bias=bias)


def bn(c: int) -> LayerSpec:
    return LayerSpec(kind=LayerKind.BN, in_ch=c, out_ch=c)


def _weight_shapes(layer: LayerSpec) -> list[tuple[int, ...]]:
    """Tensor shapes a framework would allocate for the layer."""
    k, cin, cout = layer.kernel, layer.in_ch, layer.out_ch
    match layer.kind:
        case LayerKind.CONV:
            shapes = [(cout, cin, k, k)]
            bias = (cout,)
        case LayerKind.DEPTHWISE:
            shapes = [(cin, 1, k, k)]
            bias = (cin,)
        case LayerKind.POINTWISE:
            shapes = [(cout, cin, 1, 1)]
            bias = (cout,)
        case LayerKind.FC:
            shapes = [(cout, cin)]
            bias = (cout,)
        case LayerKind.BN:
            return [(cout,), (cout,)]
        case _:
            return []
    return shapes + ([bias] if layer.bias else [])


def _random_layer(rng: np.random.Generator) -> LayerSpec:
    kind = LayerKind(rng.choice([k.value for k in LayerKind]))
    cin = int(rng.integers(1, 65))
    cout = cin if kind in (LayerKind.DEPTHWISE, LayerKind.BN, LayerKind.POOL) else int(rng.integers(1, 65))
    kernel = 1 if kind in (LayerKind.POINTWISE, LayerKind.FC) else int(rng.integers(1, 8))
    return LayerSpec(kind=kind, in_ch=cin, out_ch=cout, kernel=kernel, has_bias=bool(rng.integers(2)))


def _random_conv_stack(rng: np.random.Generator, n: int, cin: int = 3) -> list[LayerSpec]:
    layers = []
    for _ in range(n):
        cout = int(rng.integers(1, 33))
        layers.append(conv(cin, cout, int(rng.choice([1, 3, 5])), int(rng.choice([1, 2]))))
        cin = cout
    return layers


class TestLayerParams:
    """Tests for per-layer parameter counts."""

    def test_conv(self):
        """Test a bias-free 3x3 convolution."""
        assert layer_params(conv(64, 64)) == 36864

    def test_batch_norm(self):
        """Test scale and shift per channel."""
        assert layer_params(bn(64)) == 128

    def test_separable_pair(self):
        """Test a 5x5 depthwise plus 1x1 pointwise pair."""
        dw = LayerSpec(kind=LayerKind.DEPTHWISE, in_ch=64, out_ch=64, kernel=5)
        pw = LayerSpec(kind=LayerKind.POINTWISE, in_ch=64, out_ch=64)
        assert layer_params(dw) + layer_params(pw) == 5696

    def test_fc_has_bias_by_default(self):
        """Test that only fully-connected layers default to a bias."""
        assert layer_params(LayerSpec(kind=LayerKind.FC, in_ch=10, out_ch=4)) == 44
        assert layer_params(conv(1, 1, k=1)) == 1

    def test_pooling_has_no_params(self):
        """Test that pooling is free."""
        assert layer_params(LayerSpec(kind=LayerKind.POOL, in_ch=8, out_ch=8, kernel=3)) == 0

    def test_matches_weight_enumeration(self):
        """Test against allocating every weight tensor for 1000 random layers."""
        rng = np.random.default_rng(0)
        for _ in range(1000):
            layer = _random_layer(rng)
            expected = sum(np.zeros(shape, dtype=np.bool_).size for shape in _weight_shapes(layer))
            assert layer_params(layer) == expected

    def test_depthwise_channel_mismatch(self):
        """Test that depthwise layers keep their channel count."""
        with pytest.raises(ArchSpecError):
            layer_params(LayerSpec(kind=LayerKind.DEPTHWISE, in_ch=8, out_ch=16, kernel=3))

    def test_pointwise_kernel(self):
        """Test that pointwise layers are 1x1."""
        with pytest.raises(ArchSpecError):
            layer_params(LayerSpec(kind=LayerKind.POINTWISE, in_ch=8, out_ch=16, kernel=3))

    def test_separable_ratio_closed_form(self):
        """Test the separable/standard ratio against counted parameters."""
        for k in (3, 5, 7):
            for c in (16, 64, 128):
                dw = LayerSpec(kind=LayerKind.DEPTHWISE, in_ch=c, out_ch=c, kernel=k)
                pw = LayerSpec(kind=LayerKind.POINTWISE, in_ch=c, out_ch=c)
                ratio = Fraction(layer_params(dw) + layer_params(pw), layer_params(conv(c, c, k)))
                assert ratio == separable_ratio(k, c)


class TestLayerFlops:
    """Tests for multiply-accumulate counts."""

    def test_pointwise_on_single_position(self):
        """Test a 1x1 convolution on a 1x1 map."""
        assert layer_flops(conv(64, 64, k=1), 1, 1) == 4096

    def test_three_by_three(self):
        """Test a padded 3x3 convolution on an 8x8 map."""
        assert layer_flops(conv(64, 64), 8, 8) == 2_359_296

    def test_stride_reduces_positions(self):
        """Test that stride 2 quarters the output positions."""
        assert layer_flops(conv(16, 16, s=2), 8, 8) == 9 * 16 * 16 * 16

    def test_depthwise_cheaper_than_standard(self):
        """Test 5x5 depthwise against standard 3x3 for three or more channels."""
        for c in range(3, 130, 7):
            dw = LayerSpec(kind=LayerKind.DEPTHWISE, in_ch=c, out_ch=c, kernel=5)
            assert layer_flops(dw, 32, 32) <= layer_flops(conv(c, c), 32, 32)

    def test_free_layers(self):
        """Test that batch-norm and pooling count no MACs."""
        assert layer_flops(bn(8), 4, 4) == 0
        assert layer_flops(LayerSpec(kind=LayerKind.POOL, in_ch=8, out_ch=8, kernel=2, stride=2), 4, 4) == 0


class TestModelAccounting:
    """Tests for whole-spec accounting."""

    def test_empty(self):
        """Test that a spec without layers has no parameters."""
        assert model_params(ArchSpec(name="empty")) == 0
        assert model_flops(ArchSpec(name="empty")) == 0

    def test_resnet18(self):
        """Test the standard 18-layer classifier."""
        assert model_params(get_preset("resnet18")) == 11_689_512

    def test_resnet18_without_classifier(self):
        """Test the context-path placeholder."""
        assert model_params(get_preset("resnet18-backbone")) == 11_176_512

    def test_resnet101(self):
        """Test the standard 101-layer classifier."""
        assert model_params(get_preset("resnet101")) == 44_549_160

    def test_resnet18_output(self):
        """Test the final map of the context path at frame size."""
        assert output_shape(get_preset("resnet18-backbone")) == (512, 16, 32)

    def test_concat_is_additive(self):
        """Test that splitting a random stack and concatenating adds up."""
        rng = np.random.default_rng(4)
        for _ in range(50):
            layers = _random_conv_stack(rng, int(rng.integers(2, 8)))
            cut = int(rng.integers(1, len(layers)))
            first = ArchSpec(name="a", layers=layers[:cut], input=(3, 64, 64))
            second = ArchSpec(name="b", layers=layers[cut:], input=output_shape(first))
            joined = concat("ab", first, second)
            assert model_params(joined) == model_params(first) + model_params(second)
            assert model_flops(joined) == model_flops(first) + model_flops(second)

    def test_chaining_mismatch(self):
        """Test that a layer fed the wrong channel count is rejected."""
        spec = ArchSpec(name="bad", layers=[conv(3, 16), conv(32, 8)], input=(3, 32, 32))
        with pytest.raises(ArchSpecError, match="expects 32"):
            model_params(spec)

    def test_map_shrinks_to_nothing(self):
        """Test that an unpadded kernel larger than the map is rejected."""
        layer = LayerSpec(kind=LayerKind.CONV, in_ch=3, out_ch=4, kernel=5, padding=0)
        with pytest.raises(ArchSpecError):
            model_params(ArchSpec(name="tiny", layers=[layer], input=(3, 3, 3)))

    def test_branches_sum(self):
        """Test that a backbone row sums its two paths."""
        row = get_preset("sp+cp")
        assert model_params(row) == model_params(get_preset("sp")) + model_params(
            get_preset("resnet18-backbone")
        )


class TestReceptiveField:
    """Tests for receptive-field recursion."""

    def test_single_conv(self):
        """Test one 3x3 stride-1 layer."""
        assert receptive_field(ArchSpec(name="c", layers=[conv(3, 8)])) == (3, 1)

    def test_three_stride_two(self):
        """Test three 3x3 stride-2 layers."""
        spec = ArchSpec(name="c", layers=[conv(3, 8, s=2), conv(8, 8, s=2), conv(8, 8, s=2)])
        assert receptive_field(spec) == (15, 8)

    def test_five_by_five(self):
        """Test three 5x5 stride-2 layers."""
        spec = ArchSpec(name="c", layers=[conv(3, 8, 5, 2), conv(8, 8, 5, 2), conv(8, 8, 5, 2)])
        assert receptive_field(spec) == (29, 8)

    def test_spatial_path_presets(self):
        """Test that 5x5 spatial paths see further than 3x3 ones."""
        assert receptive_field(get_preset("sp"))[0] == 15
        assert receptive_field(get_preset("sp-5x5"))[0] == 29
        assert receptive_field(get_preset("sp-5x5-dw"))[0] == 29

    def test_monotone_in_depth(self):
        """Test that appending a layer never shrinks the receptive field."""
        rng = np.random.default_rng(6)
        layers = _random_conv_stack(rng, 12)
        fields = [receptive_field(ArchSpec(name="s", layers=layers[: i + 1]))[0] for i in range(12)]
        assert fields == sorted(fields)

    def test_branched_rejected(self):
        """Test that residual and branched specs are refused."""
        with pytest.raises(ArchSpecError):
            receptive_field(get_preset("resnet18"))
        with pytest.raises(ArchSpecError):
            receptive_field(get_preset("sp+cp"))


class TestPresets:
    """Tests for the preset registry."""

    def test_every_preset_is_consistent(self):
        """Test that every preset chains and has parameters."""
        for spec in preset_variants():
            assert model_params(spec) > 0, spec.name
            assert model_flops(spec) > 0, spec.name

    def test_backbone_rows(self):
        """Test the four ablation rows."""
        names = [spec.name for spec in backbone_rows()]
        assert names == list(PUBLISHED_BACKBONE_PARAMS_M)
        assert set(names) <= set(PRESETS)

    def test_separable_path_is_smaller(self):
        """Test that the separable 5x5 path undercuts both standard paths."""
        sp, sp5, sp5dw = (model_params(get_preset(n)) for n in ("sp", "sp-5x5", "sp-5x5-dw"))
        assert sp5dw < sp < sp5

    def test_wide_variant_doubles_channels(self):
        """Test that the channel-doubled path outputs twice the width."""
        assert output_shape(get_preset("sp-5x5-dw-wide"))[0] == 2 * output_shape(get_preset("sp-5x5-dw"))[0]

    def test_compact_head(self):
        """Test the single 2048-wide layer of the compact head."""
        head = get_preset("rcnn-head-compact")
        main = [layer for layer in head.layers if layer.side is None]
        assert len(main) == 1
        assert main[0].out_ch == COMPACT_HEAD_WIDTH
        assert model_params(head) < model_params(get_preset("rcnn-head-baseline"))

    def test_compressed_rpn(self):
        """Test that the compressed RPN predicts 25 anchors with fewer parameters."""
        rpn = get_preset("rpn-compressed")
        cls = [layer for layer in rpn.layers if layer.side == "cls"]
        assert cls[0].out_ch == 2 * 25
        assert model_params(rpn) < model_params(get_preset("rpn-baseline"))

    def test_custom_input(self):
        """Test rebuilding a preset at another input size."""
        spec = get_preset("sp", input=(3, 64, 64))
        assert spec.input == (3, 64, 64)
        assert output_shape(spec) == (64, 8, 8)

    def test_unknown_preset(self):
        """Test that an unknown name lists the choices."""
        with pytest.raises(ArchSpecError, match="resnet18"):
            get_preset("vgg16")

    def test_ratio_candidates(self):
        """Test that the closed-form separable ratio is among the candidates."""
        candidates = compression_ratio_candidates()
        values = {c.value for c in candidates}
        assert separable_ratio(5, 64) in values
        assert Fraction(1, 64) in values
        assert all(c.inverse > 1 for c in candidates)


class TestArchTable:
    """Tests for the analyze-arch rows."""

    def test_backbone_row_has_published_value(self):
        """Test that ablation rows carry the published figure."""
        row = analyze(get_preset("sp+cp"))
        assert row.published_m == 12.5
        assert row.rf is None
        assert row.params == model_params(get_preset("sp+cp"))

    def test_sequential_row_has_receptive_field(self):
        """Test that sequential specs report rf and jump."""
        row = analyze(get_preset("sp"))
        assert (row.rf, row.jump) == (15, 8)
        assert row.published_m is None

    def test_csv(self):
        """Test the CSV header and one row."""
        text = format_rows([analyze(get_preset("resnet18"))], fmt="csv")
        header, line = text.splitlines()
        assert header == "name,family,input,params,params_m,published_m,macs,rf,jump"
        assert line.startswith("resnet18,context-path,3x224x224,11689512,11.690,-,")

    def test_text(self):
        """Test the aligned table."""
        text = format_rows([analyze(get_preset("sp"))])
        assert text.splitlines()[0].split() == ["name", "family", "input", "params", "params_m", "published_m", "macs", "rf", "jump"]

    def test_unknown_format(self):
        """Test that unknown formats are rejected."""
        with pytest.raises(ReportFormatError):
            format_rows([], fmt="xml")
