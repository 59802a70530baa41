import json

import numpy as np
import pytest

from gravcorr.errors import UsageError
from gravcorr.utils.run_config import RunConfig, build_run_config, parse_initial_state


@pytest.mark.parametrize("text, expected", [
    ("coherent", ("coherent", None)),
    ("squeezed(0.5)", ("squeezed", 0.5)),
    ("squeezed:1.5", ("squeezed", 1.5)),
    ("thermal( 2 )", ("thermal", 2.0)),
    ("thermal:0", ("thermal", 0.0)),
])
def test_parse_initial_state(text, expected):
    assert parse_initial_state(text) == expected


@pytest.mark.parametrize("text", ["vacuum", "squeezed", "coherent(1)", "thermal(-1)", "squeezed(abc)", "thermal:inf"])
def test_parse_initial_state_rejects(text):
    with pytest.raises(ValueError):
        parse_initial_state(text)


def test_defaults():
    cfg = build_run_config()
    assert cfg.model == "ktm"
    assert cfg.measured_subsystem == 2
    assert cfg.delta_branch == "standard"
    np.testing.assert_array_equal(cfg.initial_covariance(), np.eye(4))
    assert cfg.output_or("evolve.csv").name == "evolve.csv"


def test_flags_override_json(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"model": "dktm", "eta": 0.02, "alpha_tilde": 0.1, "report_bits": True}))
    cfg = build_run_config(str(path), {"eta": 0.03, "alpha_tilde": None, "report_bits": None})
    assert cfg.model == "dktm"
    assert cfg.eta == 0.03
    assert cfg.alpha_tilde == 0.1
    assert cfg.report_bits is True
    assert cfg.generators().model_label == "dktm"


def test_unknown_json_key_is_usage_error(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"modle": "ktm"}))
    with pytest.raises(UsageError) as exc_info:
        build_run_config(str(path))
    assert "modle" in exc_info.value.message


@pytest.mark.parametrize("overrides", [
    {"eta": 1.0},
    {"n_samples": 1},
    {"tau_max": float("inf")},
    {"spacing": "cubic"},
    {"measured_subsystem": 3},
    {"initial_state": "cat"},
])
def test_invalid_values_are_usage_errors(overrides):
    with pytest.raises(UsageError):
        build_run_config(None, overrides)


def test_unreadable_config_files(tmp_path):
    with pytest.raises(UsageError):
        build_run_config(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(UsageError):
        build_run_config(str(broken))
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]")
    with pytest.raises(UsageError):
        build_run_config(str(listing))


def test_initial_covariances():
    squeezed = RunConfig(initial_state="squeezed:1").initial_covariance()
    assert squeezed[0, 0] == pytest.approx(np.e)
    thermal = RunConfig(initial_state="thermal(1)").initial_covariance()
    np.testing.assert_array_equal(thermal, 3.0 * np.eye(4))
