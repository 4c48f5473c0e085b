import json
import subprocess
import sys

import pytest

from regclose import cli, fintop
from regclose.report import CheckResult, Report, emit_report, parse_report


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def i2_file(tmp_path):
    path = tmp_path / "i2.json"
    path.write_text(fintop.dumps_space(fintop.NAMED_SPACES["I2"]()))
    return path


def scenario(tmp_path, obj, name="sc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_validate(i2_file, capsys):
    code, out, _ = run(["validate", str(i2_file), "--format", "json"], capsys)
    assert code == 0
    res = json.loads(out)["results"][0]
    assert res["details"]["form"] == "2:3.3"


def test_validate_names_the_field(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": ["a", "b"], "opens": [["a"], ["b"]]}')
    code, out, err = run(["validate", str(bad)], capsys)
    assert code == 2 and "opens" in err and out == ""


def test_spaces(capsys):
    code, out, _ = run(["spaces", "--n", "3", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["results"][0]["details"]["count"] == 9
    code, _, err = run(["spaces", "--n", "9"], capsys)
    assert code == 2 and ("ceiling" in err or "limit" in err)


def test_closure_command(capsys):
    code, out, _ = run(["closure", "--space", "I2", "--subset", "a", "--subcat", "t0", "--method", "both"], capsys)
    assert code == 0
    assert 'formula: ["a", "b"]' in out and 'bruteforce: ["a", "b"]' in out


def test_compare_commands(capsys):
    code, out, _ = run(["compare", "--a", "t0", "--b", "all", "--max-points", "3", "--format", "json"], capsys)
    assert code == 1
    res = json.loads(out)["results"][0]
    assert res["verdict"] == "fail" and res["witnesses"]
    code, _, _ = run(["compare", "--a", "indiscrete", "--b", "all", "--max-points", "3"], capsys)
    assert code == 0
    code, _, err = run(["compare", "--a", "t0", "--b", "all", "--max-points", "99"], capsys)
    assert code == 2 and "max_points" in err
    code, _, err = run(["compare", "--a", "t0", "--b", "nonsense"], capsys)
    assert code == 2 and "b" in err


def test_hull_commands(capsys):
    code, out, _ = run(["hull", "--which", "s", "--subcat", "t0", "--space", "I2", "--format", "json"], capsys)
    res = json.loads(out)["results"][0]
    assert code == 1 and res["verdict"] == "fail" and res["witnesses"]
    code, out, _ = run(["hull", "--which", "e", "--subcat", "t0", "--space", "S", "--bound", "3", "--format", "json"], capsys)
    res = json.loads(out)["results"][0]
    assert code == 0 and res["verdict"] in ("pass", "bounded-pass")
    if res["verdict"] == "bounded-pass":
        assert res["bound"] == 3


def test_diagonal_and_axioms(capsys):
    code, _, _ = run(["diagonal", "--space", "S", "--subcat", "t0"], capsys)
    assert code == 0
    code, out, _ = run(["diagonal", "--space", "I2", "--subcat", "t0", "--format", "json"], capsys)
    assert code == 1 and json.loads(out)["results"][0]["witnesses"]
    code, out, _ = run(["axioms", "--subcat", "t0", "--max-points", "2"], capsys)
    assert code == 0 and "PASS" in out


def test_bad_arguments(capsys):
    code, _, _ = run(["closure", "--space", "S"], capsys)
    assert code == 2
    code, _, err = run(["closure", "--space", "S", "--subset", "zz", "--subcat", "t0"], capsys)
    assert code == 2 and "subset" in err


def test_scenario_examples(tmp_path, capsys):
    ok = scenario(tmp_path, {"name": "ok", "universe": {"max_points": 4}, "checks": [
        {"kind": "compare", "args": {"a": "t0", "b": "seh:sierpinski"}}]})
    code, out, _ = run(["scenario", ok], capsys)
    assert code == 0
    bad = scenario(tmp_path, {"name": "bad", "universe": {"max_points": 4}, "checks": [
        {"kind": "compare", "args": {"a": "t0", "b": "all"}}]})
    code, out, _ = run(["scenario", bad, "--format", "json"], capsys)
    res = json.loads(out)["results"][0]
    assert code == 1 and res["verdict"] == "fail"
    (w,) = res["witnesses"]
    X = fintop.from_canonical_form(w["space"])
    assert X.is_indiscrete() and X.n == 2 and len(w["subset"]) == 1 and len(w["t0"]) == 2
    huge = scenario(tmp_path, {"name": "huge", "universe": {"max_points": 99}, "checks": []})
    code, _, err = run(["scenario", huge], capsys)
    assert code == 2 and "universe.max_points" in err


def test_empty_scenario(tmp_path, capsys):
    path = scenario(tmp_path, {"name": "empty", "checks": []})
    code, out, _ = run(["scenario", path], capsys)
    assert code == 0 and "summary: 0 checks" in out


@pytest.mark.parametrize(
    "obj, field",
    [
        ({"checks": [{"kind": "nope"}]}, "checks[0].kind"),
        ({"checks": [{"kind": "compare", "args": {"a": "t0"}}]}, "checks[0].args.b"),
        ({"checks": [{"kind": "hull", "args": {"which": "q", "subcat": "t0", "space": "S"}}]}, "checks[0].args.which"),
        ({"checks": "x"}, "checks"),
        ({"universe": {"max_points": -1}}, "universe.max_points"),
    ],
)
def test_scenario_diagnostics(tmp_path, capsys, obj, field):
    code, _, err = run(["scenario", scenario(tmp_path, obj)], capsys)
    assert code == 2 and field in err


def test_scenario_unparsable(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{")
    code, _, err = run(["scenario", str(path)], capsys)
    assert code == 2 and "scenario file" in err


def test_equivalence_table_in_report(tmp_path, capsys):
    path = scenario(tmp_path, {"name": "t", "universe": {"max_points": 3}, "checks": [
        {"kind": "thm41", "args": {"a": "t0", "b": "indiscrete"}}]})
    code, out, _ = run(["scenario", path], capsys)
    assert code == 0
    assert "table:" in out and "P=True" in out and "a=False" in out
    code, out, _ = run(["scenario", path, "--format", "json"], capsys)
    rows = json.loads(out)["results"][0]["details"]["table"]
    assert len(rows) == 4 and all(set(r) == {"space", "P", "a", "b", "c"} for r in rows)


def test_scenario_relative_files(tmp_path, capsys, i2_file):
    path = scenario(tmp_path, {"name": "files", "universe": {"max_points": 3}, "checks": [
        {"kind": "diagonal", "args": {"space": i2_file.name, "subcat": "t0"}},
        {"kind": "hull", "args": {"which": "s", "space": i2_file.name, "subcat": f"seh:{i2_file.name}"}}]})
    code, out, _ = run(["scenario", path, "--format", "json"], capsys)
    verdicts = [r["verdict"] for r in json.loads(out)["results"]]
    assert verdicts == ["fail", "pass"] and code == 1


def test_all_check_kinds(tmp_path, capsys):
    path = scenario(tmp_path, {"name": "kinds", "universe": {"max_points": 2}, "bounds": {"hull": 2}, "checks": [
        {"kind": "closure", "args": {"space": "S", "subset": ["1"], "subcat": "t0"}},
        {"kind": "compare", "args": {"a": "indiscrete", "b": "all"}},
        {"kind": "hull", "args": {"which": "d", "space": "S", "subcat": "t0"}},
        {"kind": "diagonal", "args": {"space": "S", "subcat": "t0"}},
        {"kind": "axioms", "args": {"subcat": "t0"}},
        {"kind": "thm41", "args": {"b": "t0"}},
        {"kind": "epi-dense", "args": {"subcat": "t0"}},
        {"kind": "oracle-agreement", "args": {"subcats": ["t0", "all"]}}]})
    code, out, _ = run(["scenario", path, "--format", "json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["summary"]["checks"] == len(cli.CHECK_KINDS) == 8
    assert {r["verdict"] for r in rep["results"]} <= {"pass", "bounded-pass"}
    for r in rep["results"]:
        if r["verdict"] == "bounded-pass":
            assert r["bound"] is not None
        assert r["duration"] is None


def test_json_reports_are_byte_identical(tmp_path):
    path = scenario(tmp_path, {"name": "det", "universe": {"max_points": 3}, "checks": [
        {"kind": "compare", "args": {"a": "t0", "b": "all"}},
        {"kind": "thm41", "args": {"b": "seh:sierpinski"}}]})
    outs = [
        subprocess.run([sys.executable, "-m", "regclose", "scenario", path, "--format", "json"],
                       capture_output=True, check=False).stdout
        for _ in range(2)
    ]
    assert outs[0] == outs[1] and outs[0]


def test_timings_flag(tmp_path, capsys):
    path = scenario(tmp_path, {"name": "t", "universe": {"max_points": 1}, "checks": [
        {"kind": "axioms", "args": {"subcat": "t0"}}]})
    code, out, _ = run(["scenario", path, "--timings", "--format", "json"], capsys)
    assert json.loads(out)["results"][0]["duration"] is not None


# --- report serialization


def test_report_round_trip():
    r = Report("demo", [
        CheckResult("a", "pass"),
        CheckResult("b", "bounded-pass", 3, [], {"note": "x"}),
        CheckResult("c", "fail", None, [{"space": "2:3.3"}], {"table": [{"P": True, "space": "1:1"}]}),
    ])
    assert parse_report(emit_report(r, "json")) == r
    assert r.exit_code == 1
    assert r.summary == {"pass": 1, "bounded-pass": 1, "fail": 1, "checks": 3}
    text = emit_report(r, "text").decode()
    assert "bound=3" in text and "witness:" in text
    with pytest.raises(ValueError):
        emit_report(r, "xml")


def test_empty_report():
    r = Report("empty")
    assert r.exit_code == 0 and parse_report(emit_report(r, "json")) == r


def test_bundled_scenarios(capsys):
    from pathlib import Path

    root = Path(__file__).resolve().parent.parent / "scenarios"
    code, _, _ = run(["scenario", str(root / "smoke.json")], capsys)
    assert code == 0
    code, out, _ = run(["scenario", str(root / "t0_vs_all.json")], capsys)
    assert code == 1 and "witness" in out
