"""Tests for settings loading and precedence."""

import pytest
from pydantic import ValidationError

from pidkit.config import ConfigFileError, PidkitSettings, load_config_file, load_settings
from pidkit.geometry.crop import EmptyAoiPolicy
from pidkit.metrics.models import AccFormula
from pidkit.pipeline.runner import PipelineMode


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, temp_dir):
    """Isolate tests from PIDKIT_* variables and any local .env file."""
    for name in list(PidkitSettings.model_fields):
        monkeypatch.delenv(f"PIDKIT_{name.upper()}", raising=False)
    monkeypatch.chdir(temp_dir)


class TestDefaults:
    """Tests for default settings."""

    def test_thresholds(self):
        """Test the standard evaluation thresholds."""
        settings = PidkitSettings()
        assert settings.p_t == 20
        assert settings.c_t == 0.8
        assert settings.iou_threshold == 0.5
        assert settings.p_t_set == [20]
        assert settings.acc_formula is AccFormula.CORRECTED

    def test_cropping(self):
        """Test the default extension and stride."""
        settings = PidkitSettings()
        assert settings.alpha == 1.2
        assert settings.symmetric is False
        assert settings.stride == 16
        assert settings.empty_aoi_policy is EmptyAoiPolicy.SKIP_DETECTION

    def test_field_descriptions(self):
        """Test that tunables are documented."""
        assert PidkitSettings.model_fields["alpha"].description
        assert PidkitSettings.model_fields["p_t"].description

    def test_composed_configs(self):
        """Test that per-stage configs carry the settings."""
        settings = PidkitSettings(alpha=1.5, p_t=30, c_t=0.7, nms_iou=0.6)
        cfg = settings.pipeline_config(PipelineMode.FULL_FRAME)
        assert cfg.crop.alpha == 1.5
        assert cfg.judge.p_t == 30
        assert cfg.eval.p_t == 30
        assert cfg.eval.c_t == 0.7
        assert cfg.nms.iou_threshold == 0.6
        assert cfg.mode is PipelineMode.FULL_FRAME
        assert settings.pipeline_config("fcm").mode is PipelineMode.FCM

    def test_validation(self):
        """Test that out-of-range values are rejected."""
        with pytest.raises(ValidationError):
            PidkitSettings(alpha=0.5)
        with pytest.raises(ValidationError):
            PidkitSettings(c_t=1.5)


class TestPrecedence:
    """Tests for environment, file and flag precedence."""

    def test_environment(self, monkeypatch):
        """Test that PIDKIT_* variables override defaults."""
        monkeypatch.setenv("PIDKIT_P_T", "35")
        monkeypatch.setenv("PIDKIT_SYMMETRIC", "true")
        settings = load_settings()
        assert settings.p_t == 35
        assert settings.symmetric is True

    def test_file_beats_environment(self, monkeypatch, temp_yaml_file):
        """Test that the config file overrides the environment."""
        monkeypatch.setenv("PIDKIT_P_T", "35")
        path = temp_yaml_file("pidkit.yaml", {"p_t": 50, "empty-aoi-policy": "full-frame"})
        settings = load_settings(path)
        assert settings.p_t == 50
        assert settings.empty_aoi_policy is EmptyAoiPolicy.FULL_FRAME

    def test_flags_beat_file(self, temp_yaml_file):
        """Test that explicit overrides win and None overrides are ignored."""
        path = temp_yaml_file("pidkit.yaml", {"p_t": 50, "alpha": 1.4})
        settings = load_settings(path, p_t=10, alpha=None)
        assert settings.p_t == 10
        assert settings.alpha == 1.4

    def test_dotenv(self, temp_dir):
        """Test that a .env file in the working directory is read."""
        (temp_dir / ".env").write_text("PIDKIT_STRIDE=32\n")
        assert PidkitSettings().stride == 32


class TestConfigFile:
    """Tests for reading config files."""

    def test_missing_path_is_empty(self):
        """Test that no path means no settings."""
        assert load_config_file(None) == {}

    def test_empty_file(self, temp_dir):
        """Test that an empty file means no settings."""
        path = temp_dir / "empty.yaml"
        path.write_text("")
        assert load_config_file(path) == {}

    def test_dashes_become_underscores(self, temp_yaml_file):
        """Test flag-style keys."""
        path = temp_yaml_file("c.yaml", {"score-threshold": 0.3})
        assert load_config_file(path) == {"score_threshold": 0.3}

    def test_not_a_mapping(self, temp_dir):
        """Test that a list document is rejected."""
        path = temp_dir / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigFileError, match="mapping"):
            load_config_file(path)

    def test_invalid_yaml(self, temp_dir):
        """Test that broken YAML is reported."""
        path = temp_dir / "bad.yaml"
        path.write_text("p_t: [1, 2\n")
        with pytest.raises(ConfigFileError):
            load_config_file(path)

    def test_unreadable(self, temp_dir):
        """Test that a missing file is reported."""
        with pytest.raises(ConfigFileError):
            load_config_file(temp_dir / "nope.yaml")

    def test_not_utf8(self, temp_dir):
        """Test that undecodable bytes are a config error."""
        path = temp_dir / "latin1.yaml"
        path.write_bytes(b"p_t: 20\nname: caf\xe9\n")
        with pytest.raises(ConfigFileError, match="UTF-8"):
            load_config_file(path)
