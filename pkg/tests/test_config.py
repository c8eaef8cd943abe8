import json

from train_track_builder.core.config import STORE_ENV_VAR, Config, get_config, set_config


class TestConfig:
    def test_defaults(self):
        cfg = Config()
        assert cfg.DEPTH == 12
        assert cfg.restarts_for(3) == 6
        cfg.MAX_RESTARTS = 2
        assert cfg.restarts_for(3) == 2

    def test_load_maps_keys(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"budget": 500, "depth": 5, "debug_mode": True, "unknown": 1}), encoding="utf-8")
        cfg = Config.load(str(path))
        assert cfg.BUDGET == 500
        assert cfg.DEPTH == 5
        assert cfg.DEBUG_MODE is True
        assert cfg.CONFIG_FILE == str(path)

    def test_missing_file_keeps_defaults(self, tmp_path, monkeypatch):
        monkeypatch.delenv(STORE_ENV_VAR, raising=False)
        cfg = Config.load(str(tmp_path / "absent.json"))
        assert cfg == Config()

    def test_corrupt_file_keeps_defaults(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{oops", encoding="utf-8")
        assert Config.load(str(path)).BUDGET == Config().BUDGET

    def test_store_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv(STORE_ENV_VAR, str(tmp_path / "env.db"))
        assert Config.load(str(tmp_path / "absent.json")).STORE_PATH == str(tmp_path / "env.db")

    def test_active_config(self):
        cfg = Config(DEPTH=3)
        set_config(cfg)
        assert get_config() is cfg
