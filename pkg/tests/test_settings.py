import json

import pytest

from src.config import Config, config
from src.settings_manager import RunConfig, RunConfigError, RunConfigManager


@pytest.fixture
def manager():
    return RunConfigManager()


class TestRunConfig:
    def test_defaults_follow_config(self):
        cfg = RunConfig()
        assert cfg.max_length == config.default_max_length
        assert cfg.depth == config.default_depth
        assert cfg.nmax == config.default_nmax
        assert cfg.height == config.default_height
        assert cfg.format == "json"

    def test_levi_forms(self):
        assert RunConfig(levi="0,2").levi_indices() == [0, 2]
        assert RunConfig(levi="maximal:1").levi_indices() == [1]
        assert RunConfig(levi="borel").levi_indices() == []
        with pytest.raises(ValueError):
            RunConfig(levi="0,x")

    def test_bad_format(self):
        with pytest.raises(ValueError):
            RunConfig(format="yaml")

    def test_check_rank(self):
        with pytest.raises(RunConfigError):
            RunConfig(levi="0,3").check_rank(2)
        RunConfig(levi="0,1").check_rank(2)


class TestRunConfigManager:
    def test_save_and_load(self, manager, tmp_path):
        path = tmp_path / "run.json"
        cfg = RunConfig(gcm="data/gcm/a2.json", levi="1", nmax=2)
        assert manager.save(cfg, path)
        assert manager.load(path) == cfg

    def test_missing_file(self, manager, tmp_path):
        with pytest.raises(RunConfigError, match="不存在"):
            manager.load(tmp_path / "absent.json")

    def test_json_error_has_position(self, manager, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "nmax": 2,\n  "depth": }', encoding="utf-8")
        with pytest.raises(RunConfigError, match=r":3:"):
            manager.load(path)

    def test_top_level_must_be_object(self, manager, tmp_path):
        path = tmp_path / "list.json"
        path.write_text(json.dumps([1, 2]), encoding="utf-8")
        with pytest.raises(RunConfigError):
            manager.load(path)

    def test_validation_error(self, manager, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"max_length": -1}), encoding="utf-8")
        with pytest.raises(RunConfigError):
            manager.load(path)

    def test_update_ignores_none_and_unknown(self, manager):
        cfg = manager.update(RunConfig(nmax=2), {"nmax": None, "depth": 9, "command": "face"})
        assert (cfg.nmax, cfg.depth) == (2, 9)

    def test_update_validates(self, manager):
        with pytest.raises(RunConfigError):
            manager.update(RunConfig(), {"height": 0})


class TestConfig:
    def test_paths(self, tmp_path):
        local = Config(tmp_path)
        assert local.gcm_dir == tmp_path / "data" / "gcm"
        assert local.golden_dir == tmp_path / "data" / "golden"

    def test_validate(self, tmp_path):
        assert config.validate()
        assert not Config(tmp_path).validate()
