import json
import subprocess
import sys

from superflag.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_algebra_dump(capsys):
    code, out, _ = run(capsys, "algebra", "dump", "--algebra", "osp", "--params", "4,4")
    assert code == 0
    assert json.loads(out)["superdimension"] == [16, 16]


def test_flag_validate_expands_shorthand(capsys):
    code, out, _ = run(capsys, "flag", "validate", "--flag", "even:2,2,1|2,2,1")
    data = json.loads(out)
    assert code == 0 and data["k"] == [4, 2, 1] and data["kind"] == "even-isotropic"


def test_invalid_flag_exits_two(capsys):
    code, out, err = run(capsys, "flag", "validate", "--flag", "2,2|2,2")
    assert code == 2 and "ChainViolation" in err and out == ""


def test_flag_charts_counts(capsys):
    code, out, _ = run(capsys, "flag", "charts", "--flag", "2,1|2,1")
    assert code == 0 and len(json.loads(out)["charts"]) == 4


def test_cocycle_command(capsys):
    code, out, _ = run(capsys, "flag", "cocycle", "--flag", "2,1|2,1", "--seed", "3", "--points", "4")
    assert code == 0


def test_fundamental_field_on_p1(capsys):
    code, out, _ = run(capsys, "fields", "fundamental", "--algebra", "gl", "--params", "2,0",
                       "--flag", "2,1|0,0", "--element", "E2,1")
    data = json.loads(out)
    assert code == 0 and data["fields"][0]["coefficients"] == {"x1_1_1": "x1_1_1^2"}


def test_span_command(capsys):
    code, out, _ = run(capsys, "fields", "span", "--algebra", "gl", "--params", "2,2", "--flag", "2,1|2,1")
    assert code == 0 and json.loads(out)["span"] == [7, 8]


def test_bwb_sections(capsys):
    code, out, _ = run(capsys, "bwb", "sections", "--case", "odd", "--k1", "3", "--l1", "1")
    assert code == 0 and json.loads(out)["total_dimension"] == 7


def test_bwb_excluded_case(capsys):
    code, _, err = run(capsys, "bwb", "sections", "--case", "even", "--k1", "1", "--l1", "1")
    assert code == 2 and "ExcludedCase" in err


def test_oracle_run(capsys):
    code, out, _ = run(capsys, "oracle", "run", "--flag", "2,1|0,0")
    data = json.loads(out)
    assert code == 0 and data["dimensions"] == [3, 0]


def test_gate_check(capsys):
    code, out, _ = run(capsys, "gate", "check", "--flag", "odd:4,2,1|4,2,1", "--no-fiber-oracle")
    assert code == 0 and not json.loads(out)["applies"]


def test_suite_list(capsys):
    code, out, _ = run(capsys, "suite", "list")
    assert code == 0 and "negative-controls" in json.loads(out)["suites"]


def test_suite_json_file_matches_stdout(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, err = run(capsys, "suite", "run", "bwb-lemma-table", "--seed", "2", "--json", str(target))
    assert code == 0
    assert target.read_text() == out
    assert "runtime_ms" in err


def test_negative_controls_exit_nonzero(capsys):
    code, out, _ = run(capsys, "suite", "run", "negative-controls")
    assert code == 1
    assert {c["status"] for c in json.loads(out)["checks"]} == {"fail"}


def test_unknown_suite_exits_two(capsys):
    code, _, err = run(capsys, "suite", "run", "nope")
    assert code == 2 and "UnknownSuite" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "superflag", "suite", "list"], capture_output=True, text=True)
    assert out.returncode == 0 and "gate-examples" in json.loads(out.stdout)["suites"]
