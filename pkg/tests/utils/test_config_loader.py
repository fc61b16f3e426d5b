import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..')))
import pytest
from unittest.mock import patch
from src.utils.config_loader import ConfigLoader, EngineSettings
from src.utils.constants import GameDefaults, InferenceDefaults, MsrDefaults


class TestConfigLoader:
    def test_load_config_with_env_vars(self):
        with patch.dict(os.environ, {'TEST_VAR': 'value'}):
            result = ConfigLoader.expand_env_vars("${TEST_VAR}")
            assert result == "value"

    def test_unknown_env_var_left_as_is(self):
        with patch.dict(os.environ, {}, clear=True):
            assert ConfigLoader.expand_env_vars("seed: ${NOT_SET}") == "seed: ${NOT_SET}"

    def test_missing_file_gives_empty_config(self, tmp_path):
        assert ConfigLoader.load_config(str(tmp_path / "absent.yaml")) == {}

    def test_bundled_settings_match_defaults(self):
        settings = ConfigLoader.load_settings()
        assert settings.max_joint_states == InferenceDefaults.MAX_JOINT_STATES
        assert settings.tolerance == InferenceDefaults.TOLERANCE
        assert settings.tie_tolerance == GameDefaults.TIE_TOLERANCE
        assert settings.msr_stages == MsrDefaults.STAGES
        assert settings.seed == 0

    def test_settings_from_file_with_env(self, tmp_path):
        path = tmp_path / "settings.yaml"
        path.write_text("verification:\n  seed: ${SEED_UNDER_TEST}\nmsr:\n  stages: [1, 0]\n")
        with patch.dict(os.environ, {'SEED_UNDER_TEST': '7'}):
            settings = ConfigLoader.load_settings(str(path))
        assert settings.seed == 7
        assert settings.msr_stages == (1, 0)
        assert settings.max_profiles == GameDefaults.MAX_PROFILES

    def test_env_selects_settings_file(self, tmp_path):
        path = tmp_path / "other.yaml"
        path.write_text("games:\n  max_profiles: 10\n")
        with patch.dict(os.environ, {'SIGSTRUCT_CONFIG': str(path)}):
            assert ConfigLoader.load_settings().max_profiles == 10

    def test_invalid_value_falls_back_to_defaults(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("inference:\n  tolerance: not-a-number\n")
        assert ConfigLoader.load_settings(str(path)) == EngineSettings()

    def test_get_section(self, tmp_path):
        path = tmp_path / "s.yaml"
        path.write_text("games:\n  max_profiles: 5\nlogging: DEBUG\n")
        assert ConfigLoader.get_section("games", str(path)) == {"max_profiles": 5}
        assert ConfigLoader.get_section("logging", str(path)) == {}
        assert ConfigLoader.get_section("absent", str(path)) == {}
