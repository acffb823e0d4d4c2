import json
import shutil
import subprocess
import sys

import pytest

from halphen.cli import main
from halphen.roots import fixture_dir


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_d8_index_two(capsys):
    code, out, _ = run(capsys, "count", "D8", "--index", "2")
    assert code == 0
    lines = out.splitlines()
    assert any("0bar" in ln and " 9 " in ln for ln in lines)
    assert any("1bar" in ln and " 6 " in ln for ln in lines)


def test_count_e8(capsys):
    code, out, _ = run(capsys, "count", "E8", "--index", "2", "--json")
    assert code == 0
    data = json.loads(out)
    assert [t["count"] for t in data["twists"]] == [3]
    code, out, _ = run(capsys, "count", "E8", "--index", "1", "--json")
    assert [t["count"] for t in json.loads(out)["twists"]] == [1]


def test_count_multiple_fiber(capsys):
    code, out, _ = run(capsys, "count", "2A4", "--index", "2", "--multiple-fiber", "1", "--json")
    assert code == 0
    assert json.loads(out)["multiple_fiber"] == 1


def test_bad_arguments_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["count", "E9", "--index", "2"])
    assert exc.value.code == 2
    assert main(["count", "E8", "--index", "0"]) == 2
    assert main(["count", "2A4", "--index", "2", "--multiple-fiber", "5"]) == 2
    assert main(["verify", "--bound", "-1"]) == 2
    capsys.readouterr()


def test_model_parse_error_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.seq"
    bad.write_text("2\n0, 1, 1\n")
    assert main(["model", "--sequence", str(bad)]) == 2
    assert main(["model", "--sequence", str(tmp_path / "missing.seq")]) == 2
    capsys.readouterr()


def test_model_unsupported_exit_three(tmp_path, capsys):
    seq = tmp_path / "z9.seq"
    seq.write_text("9\n0, 1, 2, 3, 4, 5, 6, 7, 8\n")
    code, _, err = run(capsys, "model", "--sequence", str(seq))
    assert code == 3
    assert "rank 7" in err


def test_model_d8_case1_enumerates_nine_rows(capsys):
    path = fixture_dir() / "d8_case1.seq"
    code, out, _ = run(capsys, "model", "--sequence", str(path), "--enumerate", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["index"] == 2
    assert data["configuration"] == "D8"
    assert len(data["minus_one_curves"]) == 9
    assert "(4; 2,2,1,1,1,2,0,1,1)" in data["minus_one_curves"]


def test_model_d8_case2_text(capsys):
    path = fixture_dir() / "d8_case2.seq"
    code, out, _ = run(capsys, "model", "--sequence", str(path), "--enumerate")
    assert code == 0
    assert "(-1)-curves (6)" in out
    assert "2   0   0  -1  -1  -1  -1   0  -1   0" in out


def test_model_table1_e8(capsys):
    code, out, _ = run(capsys, "model", "--table1", "E8", "--enumerate", "--json")
    data = json.loads(out)
    assert data["index"] == 1
    assert data["configuration"] == "E8"
    assert data["minus_one_curves"] == ["(0; 0,0,0,0,0,0,0,0,-1)"]


@pytest.mark.parametrize("which", ["1", "2", "3"])
def test_tables_match_golden(capsys, which):
    code, out, err = run(capsys, "tables", "--which", which, "--json")
    assert code == 0, err
    data = json.loads(out)
    assert data["diffs"] == []
    assert len(data["rows"]) == 13


def test_table2_text(capsys):
    code, out, _ = run(capsys, "tables", "--which", "2")
    assert "4A2        144" in out
    assert "D8         6,9" in out


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert out.strip().endswith("41/41 checks passed")


def test_verify_names_corrupted_matrix(tmp_path, monkeypatch, capsys):
    target = tmp_path / "fixtures"
    shutil.copytree(fixture_dir(), target)
    data = json.loads((target / "gradings.json").read_text())
    data["gradings"]["2A4"]["torsion"][0]["row"][0] = 1
    (target / "gradings.json").write_text(json.dumps(data))
    monkeypatch.setenv("HALPHEN_FIXTURES", str(target))
    code, out, _ = run(capsys, "verify", "--bound", "1")
    assert code == 1
    failing = [ln for ln in out.splitlines() if ln.startswith("FAIL")]
    assert failing
    assert all("2A4" in ln for ln in failing)


def test_json_outputs_round_trip(capsys):
    from halphen.roots import ClassGroupElement, GradingMatrix
    from halphen.picard import DivisorClass

    _, out, _ = run(capsys, "model", "--table1", "D5+A3", "--json")
    data = json.loads(out)
    q = GradingMatrix.from_json(data["grading"])
    assert q.to_json() == data["grading"]
    assert ClassGroupElement.from_json(data["delta"]).to_json() == data["delta"]
    assert [DivisorClass.from_json(c).to_json() for c in data["neg2_curves"]] == data["neg2_curves"]


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "A5+A2+A1", "--index", "3"],
        ["model", "--table1", "4A2", "--enumerate"],
        ["tables", "--which", "1"],
    ],
)
def test_output_is_deterministic(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "halphen", "count", "4A2", "--index", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "144" in proc.stdout
