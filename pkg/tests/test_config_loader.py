"""Tests for configuration loading behavior."""

from pathlib import Path

import pytest
import yaml

from dire_vertex_cover import config_loader


def test_load_full_config_falls_back_to_packaged_default(monkeypatch):
    packaged_config = {
        "solver": {"mode": "vertex-first"},
        "oracle": {"bnb_max_vertices": 30},
    }

    monkeypatch.setattr(config_loader, "_candidate_config_paths", lambda: [])
    monkeypatch.setattr(config_loader, "_load_packaged_config", lambda: packaged_config)

    loaded = config_loader.load_full_config()

    assert loaded["solver"]["mode"] == "vertex-first"
    assert loaded["solver"]["early_exit"] == config_loader.DEFAULTS["solver"]["early_exit"]
    assert loaded["oracle"]["bnb_max_vertices"] == 30
    assert loaded["harness"] == config_loader.DEFAULTS["harness"]
    assert config_loader.get_parameter("oracle", "bnb_max_vertices") == 30


def test_candidate_config_paths_prioritize_cwd(monkeypatch, tmp_path: Path):
    monkeypatch.chdir(tmp_path)

    paths = config_loader._candidate_config_paths()

    assert paths[0] == tmp_path / "config.yaml"


def test_load_full_config_prefers_cwd_override(monkeypatch, tmp_path: Path):
    cwd_config = tmp_path / "cwd-config.yaml"
    repo_config = tmp_path / "repo-config.yaml"

    cwd_config.write_text("harness:\n  trials: 50\n", encoding="utf-8")
    repo_config.write_text("harness:\n  trials: 500\n", encoding="utf-8")

    monkeypatch.setattr(config_loader, "_candidate_config_paths", lambda: [cwd_config, repo_config])
    monkeypatch.setattr(config_loader, "_load_packaged_config", lambda: {})

    loaded = config_loader.load_full_config()

    assert loaded["harness"]["trials"] == 50


def test_load_full_config_merges_local_override_with_packaged_defaults(monkeypatch, tmp_path: Path):
    override_path = tmp_path / "config.yaml"
    override_path.write_text("scaling:\n  sizes: [10, 20]\n", encoding="utf-8")

    packaged_config = {
        "scaling": {"sizes": [20, 40], "trials": 3},
        "oracle": {"exhaustive_max_vertices": 18},
    }

    monkeypatch.setattr(config_loader, "_candidate_config_paths", lambda: [override_path])
    monkeypatch.setattr(config_loader, "_load_packaged_config", lambda: packaged_config)

    loaded = config_loader.load_full_config()

    assert loaded["scaling"]["sizes"] == [10, 20]
    assert loaded["scaling"]["trials"] == 3
    assert loaded["scaling"]["slope_ceiling"] == config_loader.DEFAULTS["scaling"]["slope_ceiling"]
    assert loaded["oracle"]["exhaustive_max_vertices"] == 18
    assert config_loader.load_section("scaling")["trials"] == 3


def test_load_full_config_raises_on_malformed_local_yaml(monkeypatch, tmp_path: Path):
    bad_config = tmp_path / "config.yaml"
    bad_config.write_text("solver:\n  mode: [unterminated\n", encoding="utf-8")

    monkeypatch.setattr(config_loader, "_candidate_config_paths", lambda: [bad_config])

    with pytest.raises(yaml.YAMLError):
        config_loader.load_full_config()


def test_missing_section_falls_back_to_defaults(monkeypatch):
    monkeypatch.setattr(config_loader, "_candidate_config_paths", lambda: [])
    monkeypatch.setattr(config_loader, "_load_packaged_config", lambda: {"oracle": {}})
    monkeypatch.setattr(config_loader, "DEFAULTS", {"oracle": {"bnb_max_vertices": 40}})

    assert config_loader.load_section("oracle") == {"bnb_max_vertices": 40}
    assert config_loader.get_parameter("oracle", "unknown", default=7) == 7
