import math

import numpy as np
import pytest

import swingsim


def test_forward_points_hand_values():
    f = swingsim.forward_points(swingsim.LegGeometry(), 0.0, 1.0, math.radians(30), math.radians(60))
    assert f["ankle"] == pytest.approx((0.0050, 0.2466), abs=1e-4)
    assert f["toe"] == pytest.approx((0.1349, 0.1716), abs=1e-4)


def test_bad_geometry():
    with pytest.raises(ValueError):
        swingsim.LegGeometry(0.44, -0.43, 0.15, 0.07)


def test_boundary_lands_toe_on_target():
    b = swingsim.mz_boundary_knee(1.0, math.radians(20), 0.17)
    f = swingsim.forward_points(swingsim.LegGeometry(), 0.0, 1.0, math.radians(20), b)
    assert f["toe"][1] == pytest.approx(0.17, abs=1e-6)
    assert swingsim.mz_boundary_knee(0.9, 0.0, 0.6) is None


def test_level_run():
    r = swingsim.run_scenario("human:\n  intent: level\n")
    assert r["result"]["outcome"] == "SUCCESS_LEVEL"
    log = r["steplog"]
    assert isinstance(log["t"], np.ndarray)
    assert 460 <= len(log["t"]) <= 760
    assert len(log["theta_k"]) == len(log["t"])


def test_step_over_and_seed():
    yaml = (
        "human:\n  intent: step_over\n"
        "scene:\n  boxes:\n    - {front_m: 0.4, height_m: 0.16, depth_m: 0.1, width_m: 0.3}\n"
    )
    a = swingsim.run_scenario(yaml, seed=3)
    b = swingsim.run_scenario(yaml, seed=3)
    assert a["result"]["outcome"] == "SUCCESS_STEP_OVER"
    assert a["seed"] == 3
    assert np.array_equal(a["steplog"]["theta_k"], b["steplog"]["theta_k"])


def test_config_error():
    with pytest.raises(swingsim.ConfigError, match="line 2"):
        swingsim.run_scenario("geometry:\n  thigh: 0.44\n")


def test_default_scenario_round_trips():
    r = swingsim.run_scenario(swingsim.default_scenario("step_on"))
    assert r["intent"] == "step_on"


def test_presets():
    p = swingsim.presets()
    assert p["level"]["swing_duration_s"] == pytest.approx(0.61)
    assert p["step_on"]["swing_duration_s"] == pytest.approx(0.64)
    assert p["step_over"]["swing_duration_s"] == pytest.approx(0.81)
