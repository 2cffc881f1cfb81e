import json
import pathlib

import pytest

import normhol
from normhol.__main__ import main

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "tests" / "fixtures"


def load(name):
    return json.loads((FIXTURES / name).read_text())


def test_subcommands_listed():
    assert "pipeline" in normhol.SUBCOMMANDS
    assert len(normhol.SUBCOMMANDS) == 8


def test_classify_type2_fixture():
    report = normhol.classify_bbi(load("type2_so3.json"))
    assert report["type"] == "Type2"
    assert report["m"] == 3
    assert report["mode"] == "exact"


def test_curvature_space_so2():
    report = normhol.curvature_space(load("so2.json"))
    assert (report["dim_K"], report["dim_B"]) == (1, 2)


def test_curvature_of_shape_family():
    report = normhol.curvature(load("sphere_family.json"))
    assert report["identities"]["all"]
    assert report["trace_formula"]
    # [A1, A2] = [[0, 2], [-2, 0]], so -1/2 Tr([A1, A2]^2) = 4
    assert report["tensor"]["values"][0][1][0][1] == 4


def test_float_mode_accepts_fractional_literals():
    family = {"signature": {"p": 0, "q": 2}, "tangent_dim": 2,
              "shape_operators": {"e1": [[0.5, 0], [0, 0]], "e2": [[0, 1], [1, 0]]}}
    with pytest.raises(normhol.InputError):
        normhol.curvature(family)
    assert normhol.curvature(family, mode="float")["mode"] == "float"
    family["shape_operators"]["e1"] = [["1/2", 0], [0, 0]]
    assert normhol.curvature(family)["mode"] == "exact"


def test_pipeline_flat_plane_is_trivial():
    report = normhol.pipeline(load("flat_plane.json"))
    assert report["holonomy"]["trivial"]


def test_light_cone_pipeline_deterministic():
    data = load("light_cone.json")
    a = normhol.run("pipeline", data, seed=7)
    b = normhol.run("pipeline", json.dumps(data), seed=7)
    assert a == b
    assert a["light_cone"]["all_on_cone"]


def test_invalid_input_raises_value_error():
    with pytest.raises(ValueError):
        normhol.decompose({"dim": 2, "generators": [[[1, 0], [0, 0]]]})
    with pytest.raises(ValueError):
        normhol.run("frobnicate", {})
    with pytest.raises(ValueError):
        normhol.run("curvature", "{broken")


def test_command_line_entry(capsys):
    assert main(["normhol", "curvature-space", "--algebra", str(FIXTURES / "so2.json")]) == 0
    out = capsys.readouterr().out
    assert out.endswith("\n")
    assert json.loads(out)["dim_B"] == 2
    assert main(["normhol", "nope"]) == 64
