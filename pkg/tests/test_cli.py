import json

import pytest

from ordalloc.cli import _rat_from_str, _rat_to_str, main
from fractions import Fraction as F

OBJECTS = ["a", "b", "c"]
PREFS = [["a", "b", "c"]] * 3
MIXTURE = [
    ["1/2", "0", "1/2"],
    ["1/4", "1/2", "1/4"],
    ["1/4", "1/2", "1/4"],
]


def write(tmp_path, data, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_rational_round_trip():
    for s in ("2/3", "0", "1", "17/12"):
        assert _rat_to_str(_rat_from_str(s)) == s
    assert _rat_from_str(3) == F(3)


def test_bad_rationals_are_input_errors(tmp_path, capsys):
    path = write(tmp_path, {"objects": OBJECTS, "preferences": PREFS, "allocation": [["1/0", "0", "0"]] * 3})
    assert main(["check", path]) == 2
    assert "error:" in capsys.readouterr().err


def test_floats_rejected(tmp_path):
    alloc = [[0.5, 0, 0.5], [0.25, 0.5, 0.25], [0.25, 0.5, 0.25]]
    path = write(tmp_path, {"objects": OBJECTS, "preferences": PREFS, "allocation": alloc})
    assert main(["check", path]) == 2


def test_check_inefficient_exits_1(tmp_path, capsys):
    path = write(tmp_path, {"objects": OBJECTS, "preferences": PREFS, "allocation": MIXTURE})
    assert main(["check", path, "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["ambiguous"] is True
    assert report["unambiguous"] is False
    assert report["certificate"]["witnesses"].count(None) < 3
    assert len(report["falsifying_utilities"]) == 3
    assert report["lemma_violations"]["support_bound"] == [[1, 2]]


def test_check_efficient_exits_0(tmp_path, capsys):
    alloc = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    path = write(tmp_path, {"objects": OBJECTS, "preferences": [["a", "b", "c"], ["b", "a", "c"], ["c", "b", "a"]], "allocation": alloc})
    assert main(["check", path, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["unambiguous"] is True
    assert "certificate" not in report


def test_run_builtin_with_trace(tmp_path, capsys):
    data = {
        "objects": ["a", "b", "c", "d", "e"],
        "preferences": [
            ["a", "e", "d", "c", "b"],
            ["a", "b", "d", "e", "c"],
            ["b", "e", "c", "a", "d"],
            ["a", "e", "b", "c", "d"],
            ["b", "a", "c", "e", "d"],
        ],
        "mechanism": {"builtin": "paper-3.2"},
    }
    path = write(tmp_path, data)
    assert main(["run", path, "--json", "--decompose"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["allocation"][0] == ["1/3", "0", "0", "0", "2/3"]
    assert report["allocation"][2] == ["0", "0", "0", "1", "0"]
    assert report["trace"][0].keys() == {"0", "1"}
    weights = [F(t["weight"]) for t in report["decomposition"]]
    assert sum(weights) == 1


def test_run_declarative_rule(tmp_path, capsys):
    data = {
        "objects": OBJECTS,
        "preferences": [["a", "b", "c"], ["a", "c", "b"], ["b", "a", "c"]],
        "mechanism": {
            "rule": [
                {"when": {"step": 0}, "do": {"diarchy": [0, 1], "alpha": "1/3"}},
                {"do": {"monarchy-next": [2, 0, 1]}},
            ]
        },
    }
    path = write(tmp_path, data)
    assert main(["run", path, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["allocation"][0] == ["1/3", "2/3", "0"]
    assert report["allocation"][1] == ["2/3", "0", "1/3"]


def test_run_rsd_spec(tmp_path, capsys):
    data = {
        "objects": OBJECTS,
        "preferences": PREFS,
        "mechanism": {"rsd": {"orders": [[0, 1, 2], [2, 1, 0]], "weights": ["1/2", "1/2"]}},
    }
    path = write(tmp_path, data)
    assert main(["run", path, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["allocation"][1] == ["0", "1", "0"]


def test_verify_serial_dictatorship(tmp_path, capsys):
    data = {"objects": OBJECTS, "mechanism": {"serial-dictatorship": [0, 1, 2]}}
    path = write(tmp_path, data)
    code = main(["verify", path, "--json", "--axioms", "strategy-proofness,non-bossiness,unambiguous-efficiency"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert all(entry["verdict"] == "holds" for entry in report.values())


def test_verify_flags_violations(tmp_path, capsys):
    data = {"objects": OBJECTS, "mechanism": {"uniform-rsd": True}}
    path = write(tmp_path, data)
    code = main(["verify", path, "--json", "--axioms", "unambiguous-efficiency,symmetry"])
    assert code == 1
    report = json.loads(capsys.readouterr().out)
    assert report["unambiguous-efficiency"]["verdict"] == "violated"
    assert report["unambiguous-efficiency"]["witness"] is not None
    assert report["symmetry"]["verdict"] == "holds"


def test_symmetry_cost_command(capsys):
    assert main(["symmetry-cost", "--n", "5", "--eps", "1/1000000", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["bound"] == "3/5"
    gain = F(report["gain"])
    assert 0 < F(3, 5) - gain < F(1, 10000)


def test_symmetry_cost_rejects_bad_eps(capsys):
    assert main(["symmetry-cost", "--n", "5", "--eps", "1/2"]) == 2


def test_decompose_command(tmp_path, capsys):
    path = write(tmp_path, {"objects": OBJECTS, "allocation": MIXTURE})
    assert main(["decompose", path, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    total = [[F(0)] * 3 for _ in range(3)]
    for term in report["terms"]:
        w = F(term["weight"])
        for i in range(3):
            for a in range(3):
                total[i][a] += w * F(term["matrix"][i][a])
    assert [[str(x) for x in row] for row in total] == [
        ["1/2", "0", "1/2"],
        ["1/4", "1/2", "1/4"],
        ["1/4", "1/2", "1/4"],
    ]


def test_missing_sections(tmp_path):
    path = write(tmp_path, {"objects": OBJECTS})
    assert main(["check", path]) == 2
    assert main(["run", path]) == 2
    assert main(["decompose", path]) == 2


def test_missing_file():
    assert main(["check", "/nonexistent/problem.json"]) == 2


def test_duplicate_object_names(tmp_path):
    path = write(tmp_path, {"objects": ["a", "a", "b"], "preferences": PREFS})
    assert main(["check", path]) == 2
