import json
from pathlib import Path

import pytest

from gridrig.cli import run

GOLDEN = Path(__file__).parent / "golden"

CASES = [
    ("sparsity_loop", ["sparsity", "-i", "loop.json", "--variant", "221"]),
    ("analyze_tall_triangles", ["analyze", "-i", "tall_triangles.json"]),
    ("construct_two_k3_anti", ["construct", "-i", "two_k3.json", "--mode", "anti"]),
    ("construct_fixed_bar_sym", ["construct", "-i", "fixed_bar.json", "--mode", "sym"]),
    ("realize_fixed_bar_sym", ["realize", "-i", "fixed_bar.json", "--mode", "sym"]),
    ("realize_two_k3_anti", ["realize", "-i", "two_k3.json", "--mode", "anti"]),
    ("crosscheck_1000", ["crosscheck", "--random", "1000", "--max-orbits", "5", "--seed", "42"]),
]


def invoke(argv, capsys):
    argv = [str(GOLDEN / a) if a.endswith(".json") else a for a in argv]
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name,argv", CASES, ids=[c[0] for c in CASES])
def test_golden_output(name, argv, capsys):
    code, out, _ = invoke(argv, capsys)
    assert code == 0
    assert out == (GOLDEN / f"{name}.out.json").read_text()


def test_golden_contents_make_sense():
    assert json.loads((GOLDEN / "sparsity_loop.out.json").read_text()) == {"sparse": True, "tight": True}
    rep = json.loads((GOLDEN / "analyze_tall_triangles.out.json").read_text())["report"]["predicates"]
    assert rep["sym_isostatic"] and not rep["anti_isostatic"] and not rep["inf_rigid"]
    cc = json.loads((GOLDEN / "crosscheck_1000.out.json").read_text())
    assert cc["cases"] == cc["agreements"] == 1000 and cc["failures"] == []


def test_byte_identical_reruns(capsys):
    argv = ["realize", "-i", "two_k3.json", "--mode", "anti", "--method", "random", "--seed", "9"]
    first = invoke(argv, capsys)
    assert first[0] == 0
    assert invoke(argv, capsys) == first


def test_output_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = invoke(["sparsity", "-i", "loop.json", "-o", str(target)], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text()) == {"sparse": True, "tight": True}


def write(tmp_path, obj):
    p = tmp_path / "in.json"
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.mark.parametrize(
    "obj,path",
    [
        ({"orbits": ["a"], "edges": [{"id": "e", "u": "a", "v": "a", "gain": 2}]}, "$.edges[0].gain"),
        ({"orbits": ["a"], "edges": [{"id": "e", "u": "a", "v": "b", "gain": 1}]}, "$.edges[0].v"),
        ({"orbits": ["a"], "edges": [{"id": "e", "u": "a", "v": "a", "gain": 1}]}, "$.edges[0].gain"),
        ({"orbits": ["a", "a"], "edges": []}, "$.orbits[1]"),
        ({"edges": []}, "$"),
    ],
)
def test_schema_errors_exit_2(tmp_path, capsys, obj, path):
    code, out, err = invoke(["sparsity", "-i", write(tmp_path, obj)], capsys)
    assert code == 2 and out == ""
    assert json.loads(err)["path"] == path


def test_framework_with_float_coordinate_is_schema_error(tmp_path, capsys):
    fw = json.loads((GOLDEN / "tall_triangles.json").read_text())
    fw["reps"]["a"][0] = 0.5
    code, _, err = invoke(["analyze", "-i", write(tmp_path, fw)], capsys)
    assert code == 2
    assert json.loads(err)["path"] == "$.reps.a[0]"


def test_domain_errors_exit_1(tmp_path, capsys):
    code, _, err = invoke(["construct", "-i", "loop.json", "--mode", "anti"], capsys)
    assert code == 1
    assert "message" in json.loads(err)
    fw = json.loads((GOLDEN / "tall_triangles.json").read_text())
    fw["reps"]["a"] = ["0", "0"]
    code, _, _ = invoke(["analyze", "-i", write(tmp_path, fw)], capsys)
    assert code == 1


def test_realize_custom_norm_file(tmp_path, capsys):
    norm = tmp_path / "norm.json"
    norm.write_text(json.dumps({"F1": ["2", "1"], "F2": ["-1", "3"]}))
    code, out, _ = invoke(["realize", "-i", "two_k3.json", "--mode", "anti", "--norm", str(norm)], capsys)
    assert code == 0
    assert json.loads(out)["framework"]["norm"] == {"F1": ["2", "1"], "F2": ["-1", "3"]}


def test_fuzz_writes_no_artifacts_when_clean(tmp_path, capsys):
    code, out, _ = invoke(["fuzz", "--cases", "40", "--seed", "3", "--out", str(tmp_path)], capsys)
    assert code == 0
    summary = json.loads(out)
    assert summary["cases"] == 40 and summary["failures"] == 0 and not list(tmp_path.iterdir())
