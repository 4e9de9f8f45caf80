import json
import math
import os
import pathlib

import pytest

import gvf

SCENARIOS = pathlib.Path(os.environ.get("GVF_SCENARIO_DIR", pathlib.Path(__file__).parents[2] / "scenarios"))


def test_bump_partition_and_equal_level():
    for phi in [-1.4, -1.0, -0.75, -0.3, -0.01]:
        zin, zout = gvf.bump_values(-1.5, 0.1, 0.1, phi)
        assert zin + zout == pytest.approx(1.0, abs=1e-12)
    assert gvf.equal_level(-1.5, 0.1, 0.1) == pytest.approx(-0.75, abs=1e-12)
    zin, zout = gvf.bump_values(-1.5, 0.1, 0.1, -0.75)
    assert zin == pytest.approx(0.5, abs=1e-12)


def test_rbf_fit_weights_follow_symmetry():
    samples = [[1.5, 0, 0], [1.5, 2.6, 0], [-0.75, 1.3, 0], [-3, 0, 0], [-0.75, -1.3, 0], [1.5, -2.6, 0]]
    weights, rcond = gvf.fit_rbf(samples)
    assert rcond > 1e-12
    # The sample set is symmetric under 120 degree rotations up to rounding of 2.6 and 1.3.
    assert weights[0] == pytest.approx(weights[2], abs=5e-3)
    assert weights[1] == pytest.approx(weights[3], abs=5e-3)


def test_scenario_round_trip():
    sc = gvf.Scenario.load(str(SCENARIOS / "sim1.json"))
    assert sc.name == "sim1"
    doc = sc.to_dict()
    assert len(doc["obstacles"]) == 6
    again = gvf.Scenario.from_dict(doc)
    assert json.dumps(again.to_dict(), sort_keys=True) == json.dumps(doc, sort_keys=True)


def test_invalid_scenario_names_key():
    doc = gvf.Scenario.load(str(SCENARIOS / "sim2_composite.json")).to_dict()
    doc["obstacles"][0]["c"] = 1.0
    with pytest.raises(ValueError, match=r"obstacles\[0\]\.c"):
        gvf.Scenario.from_dict(doc)


def test_field_outside_obstacles_is_unit_path_field():
    sc = gvf.Scenario.load(str(SCENARIOS / "sim2_composite.json"))
    u, v = sc.field([3.0, 1.5])
    assert math.hypot(u, v) == pytest.approx(1.0, abs=1e-12)


def test_sim2_census_and_indices():
    sc = gvf.Scenario.load(str(SCENARIOS / "sim2_composite.json"))
    eqs = sc.equilibria(window=[-2.5, 2.5, -3.5, 1.5], grid_n=128)
    classes = sorted(e["class"] for e in eqs)
    assert classes == ["node", "saddle", "saddle"]
    assert sc.index_census(0, "repulsive")["boundary_index"] == 1
    reactive = sc.index_census(0, "reactive")
    assert reactive["boundary_index"] == 0
    assert reactive["additive"]


def test_conditions_report_shape():
    sc = gvf.Scenario.load(str(SCENARIOS / "sim2_switching.json"))
    checks = {c["id"]: c["verdict"] for c in sc.conditions()["checks"]}
    assert checks["composite.C2"] == "fail"
    assert checks["switching.C2"] == "pass"


def test_short_run_report():
    doc = gvf.Scenario.load(str(SCENARIOS / "sim2_composite.json")).to_dict()
    doc["sim"]["T"] = 1.0
    report = gvf.Scenario.from_dict(doc).run()
    assert report["trajectories"][0]["samples"] == 1001
    assert {m["objective"] for m in report["trajectories"][0]["monitors"]} >= {"safety", "penetrability"}


def test_svg_is_deterministic():
    sc = gvf.Scenario.load(str(SCENARIOS / "fig4_enlarged.json"))
    assert sc.svg() == sc.svg()
    assert sc.svg().startswith("<svg")


def test_escape_census_with_switching():
    doc = gvf.Scenario.load(str(SCENARIOS / "sim2_switching.json")).to_dict()
    doc["sim"]["T"] = 20.0
    census = gvf.Scenario.from_dict(doc).escape_census(seeds=2)
    assert census["sampled"] + census["skipped"] == 4
    assert census["stuck"] == 0
