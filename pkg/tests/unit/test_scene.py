"""Tests for synthetic scenes and the oracle detector."""

import pytest

from pidkit.geometry.boxes import bbox_iou
from pidkit.pipeline.oracle import DetectorNoise, oracle_detect
from pidkit.pipeline.scene import (
    MAX_PEDESTRIAN_IOU,
    SceneParams,
    build_scene,
    generate_boundary_scene,
    generate_scene,
)
from pidkit.shared.errors import GeometryError
from pidkit.shared.models import BBox, Rect


class TestSceneParams:
    """Tests for scene parameter validation."""

    def test_defaults(self):
        """Test the default frame size."""
        params = SceneParams()
        assert (params.width, params.height) == (1024, 512)

    def test_count_range(self):
        """Test that the pedestrian count range must be ordered."""
        with pytest.raises(ValueError):
            SceneParams(min_pedestrians=5, max_pedestrians=2)

    def test_horizon_range(self):
        """Test that the horizon lies strictly inside the frame."""
        with pytest.raises(ValueError):
            SceneParams(horizon=(0.0, 0.5))

    def test_pedestrians_must_fit(self):
        """Test that very tall pedestrians are rejected for small frames."""
        with pytest.raises(ValueError):
            SceneParams(width=256, height=128, max_ped_width=60)


class TestBuildScene:
    """Tests for building scenes from explicit geometry."""

    def test_pedestrian_above_road(self):
        """Test a pedestrian in the top-left corner above a bottom-half road."""
        road = [(0, 256), (1024, 256), (1024, 512), (0, 512)]
        scene = build_scene(1024, 512, road, [BBox.of(0, 0, 20, 50), BBox.of(500, 300, 520, 350)])
        assert [c.intrusion for c in scene.gt_cases] == [False, True]
        assert scene.frame_id == "scene-0"

    def test_trapezoid_road(self):
        """Test a trapezoid over the bottom half."""
        road = [(0, 512), (1024, 512), (700, 256), (300, 256)]
        scene = build_scene(1024, 512, road, [BBox.of(0, 0, 30, 60)])
        assert not scene.gt_cases[0].intrusion
        assert scene.mask.set_count > 0

    def test_degenerate_road(self):
        """Test that a zero-area road is rejected."""
        with pytest.raises(GeometryError):
            build_scene(100, 100, [(0, 0), (50, 50), (100, 100)], [])

    def test_pedestrian_off_frame(self):
        """Test that pedestrians must lie inside the frame."""
        with pytest.raises(GeometryError):
            build_scene(100, 100, [(0, 50), (100, 50), (100, 100), (0, 100)], [BBox.of(90, 90, 110, 100)])


class TestGenerateScene:
    """Tests for seeded scene generation."""

    def test_deterministic(self):
        """Test that the same seed gives the same scene."""
        a = generate_scene(SceneParams(), 42)
        b = generate_scene(SceneParams(), 42)
        assert a.pedestrians == b.pedestrians
        assert a.road_polygon == b.road_polygon
        assert a.mask == b.mask

    def test_seeds_differ(self):
        """Test that different seeds give different scenes."""
        assert generate_scene(SceneParams(), 1).pedestrians != generate_scene(SceneParams(), 2).pedestrians

    def test_labels_verified_by_pixel_count(self):
        """Test every label of 100 scenes against a per-pixel recount."""
        params = SceneParams()
        for seed in range(100):
            scene = generate_scene(params, seed)
            assert scene.verify_labels(params.p_t), seed

    def test_scene_invariants(self):
        """Test frame containment, spacing and the guaranteed intrusion."""
        params = SceneParams()
        for seed in range(100):
            scene = generate_scene(params, seed)
            assert any(c.intrusion for c in scene.gt_cases)
            assert all(p.within(scene.width, scene.height) for p in scene.pedestrians)
            assert len(scene.pedestrians) <= params.max_pedestrians
            peds = scene.pedestrians
            for i, a in enumerate(peds):
                for b in peds[i + 1 :]:
                    assert bbox_iou(a, b) <= MAX_PEDESTRIAN_IOU

    def test_small_frame(self):
        """Test generation with a reduced frame size."""
        params = SceneParams(width=256, height=128, min_ped_width=6, max_ped_width=12, p_t=5)
        scene = generate_scene(params, 3)
        assert scene.mask.width == 256
        assert scene.verify_labels(5)


class TestBoundaryScene:
    """Tests for the boundary-straddling scene family."""

    def test_straddler_is_intrusion(self):
        """Test that the first pedestrian crosses the road's right edge and intrudes."""
        for seed in range(20):
            scene = generate_boundary_scene(seed)
            straddler = scene.pedestrians[0]
            right = max(x for x, _ in scene.road_polygon)
            assert straddler.x_min < right < straddler.x_max
            assert straddler.center[0] > right + 16
            assert scene.gt_cases[0].intrusion
            assert scene.verify_labels()

    def test_frame_id(self):
        """Test the boundary frame naming."""
        assert generate_boundary_scene(7).frame_id == "boundary-7"


class TestOracleDetect:
    """Tests for the seeded oracle detector."""

    @pytest.fixture
    def scene(self):
        """A generated scene with several pedestrians."""
        return generate_scene(SceneParams(min_pedestrians=6, max_pedestrians=8), 5)

    @pytest.fixture
    def full(self, scene):
        """The whole frame."""
        return Rect.of(0, 0, scene.width, scene.height)

    def test_noiseless_full_frame(self, scene, full):
        """Test that a noiseless oracle returns the ground-truth boxes."""
        dets = oracle_detect(scene, DetectorNoise(), full)
        assert [d.box for d in dets] == scene.pedestrians
        assert all(d.confidence == 0.95 for d in dets)
        assert DetectorNoise().noiseless

    def test_noiseless_flag(self):
        """Test that any localization, miss or spurious noise clears the flag, but spread does not."""
        assert DetectorNoise(spread=0.2, seed=5).noiseless
        assert not DetectorNoise(jitter_px=1).noiseless
        assert not DetectorNoise(drop_prob=0.1).noiseless
        assert not DetectorNoise(spurious_rate=0.5).noiseless

    def test_drop_everything(self, scene, full):
        """Test that with every pedestrian dropped only spurious boxes remain."""
        noise = DetectorNoise(drop_prob=1.0, spurious_rate=3.0, seed=1)
        dets = oracle_detect(scene, noise, full)
        assert all(d.box not in scene.pedestrians for d in dets)
        assert oracle_detect(scene, DetectorNoise(drop_prob=1.0), full) == []

    def test_left_half(self, scene):
        """Test that nothing centered in the right half is reported."""
        left = Rect.of(0, 0, scene.width // 2, scene.height)
        noise = DetectorNoise(spurious_rate=4.0, seed=2)
        for det in oracle_detect(scene, noise, left):
            assert det.box.center[0] < scene.width // 2

    def test_no_region(self, scene):
        """Test that a skipped frame yields no detections."""
        assert oracle_detect(scene, DetectorNoise(spurious_rate=5.0), None) == []

    def test_deterministic(self, scene, full):
        """Test that the same noise seed gives the same detections."""
        noise = DetectorNoise(jitter_px=5, drop_prob=0.3, spurious_rate=2.0, spread=0.1, seed=9)
        assert oracle_detect(scene, noise, full) == oracle_detect(scene, noise, full)

    def test_visibility_does_not_shift_draws(self, scene, full):
        """Test that hiding pedestrians leaves the others' noise unchanged."""
        noise = DetectorNoise(jitter_px=6, spread=0.05, seed=4)
        everywhere = oracle_detect(scene, noise, full)
        left = Rect.of(0, 0, scene.width // 2, scene.height)
        partial = oracle_detect(scene, noise, left)
        assert all(d in everywhere for d in partial)

    def test_jitter_bounded(self, scene, full):
        """Test that jittered boxes move each edge by at most jitter_px."""
        dets = oracle_detect(scene, DetectorNoise(jitter_px=3, seed=11), full)
        for det, ped in zip(dets, scene.pedestrians, strict=True):
            for a, b in zip(det.box.as_tuple(), ped.as_tuple(), strict=True):
                assert abs(a - b) <= 3
