#!/usr/bin/env python3
"""
Tests for the configuration layer
"""

import json

from config.settings import DEFAULTS, Config


def test_creates_default_file(tmp_path):
    path = tmp_path / "config.json"
    cfg = Config(str(path))
    assert cfg.get("default_variant") == "tdepth1"
    assert json.loads(path.read_text(encoding="utf-8")) == DEFAULTS


def test_file_values_override_defaults(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"verify_max_inputs": 12}), encoding="utf-8")
    cfg = Config(str(path))
    assert cfg.get("verify_max_inputs") == 12
    assert cfg.get("statevector_max_qubits") == DEFAULTS["statevector_max_qubits"]


def test_corrupt_file_falls_back(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{not json", encoding="utf-8")
    assert Config(str(path)).get("random_pairs") == DEFAULTS["random_pairs"]


def test_set_persists(tmp_path):
    path = tmp_path / "config.json"
    Config(str(path)).set("default_variant", "logical-and")
    assert Config(str(path)).get("default_variant") == "logical-and"


def test_validate_variant(tmp_path):
    cfg = Config(str(tmp_path / "config.json"))
    assert cfg.validate_variant("logical-and")[0]
    ok, message = cfg.validate_variant("relative-phase")
    assert not ok and "tdepth1" in message
