"""Unit tests for configuration loading."""

from pathlib import Path

from config.settings import BUNDLED_DATA_DIR, Configuration, get_configuration


class TestConfiguration:
    """Test cases for configuration defaults and overrides."""

    def test_defaults(self, monkeypatch):
        """Test that the bundled data directory and bounds are the defaults."""
        monkeypatch.delenv("QUADALG_DATA", raising=False)
        config = get_configuration()
        assert config.data_dir == BUNDLED_DATA_DIR
        assert (Path(config.data_dir) / "systems.json").is_file()
        assert config.default_bound <= config.laurent_bound == 16

    def test_data_directory_from_environment(self, monkeypatch, tmp_path):
        """Test that QUADALG_DATA overrides the data directory."""
        monkeypatch.setenv("QUADALG_DATA", str(tmp_path))
        assert get_configuration().data_dir == str(tmp_path)

    def test_overrides_skip_unset_values(self):
        """Test that None overrides keep the configured value."""
        base = get_configuration()
        config = Configuration.from_overrides({"default_bound": None, "seed": 5})
        assert config.default_bound == base.default_bound
        assert config.seed == 5
