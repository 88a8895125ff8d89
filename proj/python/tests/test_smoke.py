import json
import os
from pathlib import Path

import pytest

import papdyn

CONFIGS = Path(os.environ.get("PAPDYN_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


@pytest.fixture(scope="module")
def example():
    return papdyn.load_config(str(CONFIGS / "example_4_1.json"))


def test_constants(example):
    k = papdyn.constants(example)
    assert k["L"] == pytest.approx(0.4, abs=1e-12)
    assert k["p1"] == pytest.approx(0.75, abs=1e-12)
    assert k["q1"] == pytest.approx(0.9, abs=1e-12)
    assert k["ball_radius"] == pytest.approx(1.2, abs=1e-12)
    assert k["overall_pass"]


def test_check_command(example):
    r = papdyn.run_command(example, "check")
    assert r["exit_code"] == papdyn.EXIT_PASS
    assert json.loads(r["json"])["overall_pass"] is True


def test_scaled_example_fails_verdict():
    scaled = papdyn.load_config(str(CONFIGS / "example_4_1_scaled.json"))
    assert papdyn.run_command(scaled, "check")["exit_code"] == papdyn.EXIT_VERDICT
    with pytest.raises(papdyn.NumericalError):
        papdyn.decay_rate(scaled)


def test_round_trip(example):
    assert papdyn.parse_config(example.to_json()) == example


def test_config_errors():
    with pytest.raises(papdyn.ConfigError, match="model.d"):
        papdyn.parse_config('{"model": {"n": 2, "c": ["1", "1"], "d": [["0", "0", "0"], ["0", "0", "0"]]}}')
    with pytest.raises(papdyn.Error):
        papdyn.parse_config("{")
    with pytest.raises(ValueError):
        papdyn.run_command(papdyn.parse_config('{"model": {"n": 1, "c": ["1"]}}'), "plot")


def test_simulate_method_of_steps():
    cfg = papdyn.parse_config(
        '{"model": {"n": 1, "c": ["0"], "a": [["-1"]], "g": {"shape": "custom_table",'
        ' "table": {"x": [-10, 10], "y": [-10, 10]}}, "history": 1}}'
    )
    traj = papdyn.simulate(cfg, t_end=2.0, step=1e-3)
    assert traj["t"][-1] == pytest.approx(2.0)
    assert traj["x"][-1][0] == pytest.approx(-0.5, abs=1e-6)


def test_picard_and_decay(example):
    r = papdyn.picard_solve(example)
    assert r["converged"]
    assert r["empirical_ratio"] <= 0.95
    assert r["distance"] <= 1.2
    cert = papdyn.decay_rate(example)
    assert cert["lambda"] > 0
    assert all(m < 1 for m in cert["margin_check"])
    assert any(m >= 1 for m in papdyn.margin_check(example, 5 * cert["lambda"]))
