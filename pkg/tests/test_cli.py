import json
import subprocess
import sys
from pathlib import Path

import pytest

from segrecalc.cli import main

ROOT = Path(__file__).resolve().parent.parent
SCENES = ROOT / "scenes"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_json(capsys):
    code, out, _ = run(capsys, "compute", "--scene", str(SCENES / "plane_line_p3.json"), "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["formula"] == "thm1"
    assert [c["value"] for c in data["coefficients"]] == ["0", "1", "0", "-4"]
    assert [c["monomial"] for c in data["coefficients"]] == ["H^0", "H^1", "H^2", "H^3"]


def test_compute_table_and_max_codim(capsys):
    code, out, _ = run(capsys, "compute", "--scene", str(SCENES / "two_lines_p3.json"), "--format", "table", "--max-codim", "2")
    assert code == 0
    assert "formula: thm2" in out
    assert "H^3" not in out and "H^2" in out


def test_compute_formula_override(capsys):
    code, out, _ = run(capsys, "compute", "--scene", str(SCENES / "plane_line_p3.json"), "--formula", "oracle", "--format", "json")
    assert code == 0 and json.loads(out)["formula"] == "oracle"


def test_hypothesis_rejection_exit_code(capsys):
    code, _, err = run(capsys, "compute", "--scene", str(SCENES / "two_lines_p3_claimed_transverse.json"))
    assert code == 1
    assert "codimensions" in err


def test_schema_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema_version": "1", "ambient": {"kind": "projective_space", "dim": 2}, "components": [], "extra": 1}')
    code, _, err = run(capsys, "compute", "--scene", str(bad))
    assert code == 2 and "extra" in err


def test_missing_file_exit_code(capsys, tmp_path):
    code, _, _ = run(capsys, "compute", "--scene", str(tmp_path / "nope.json"))
    assert code == 2


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--trunc", "3", "--cases", "5")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("PASS  overall")


def test_verify_counterexample_exit_code(capsys, monkeypatch):
    import segrecalc.suite as suite

    checks = list(suite.CHECKS)
    checks[0] = (checks[0][0], lambda rng, t: "forced disagreement")
    monkeypatch.setattr(suite, "CHECKS", tuple(checks))
    code, out, _ = run(capsys, "verify", "--trunc", "2", "--cases", "2")
    assert code == 3 and "forced disagreement" in out


def test_qpoly(capsys):
    code, out, _ = run(capsys, "qpoly", "--roots", "1", "--trunc", "2")
    assert code == 0
    assert "Q = -2 + 3*E + 3*c1" in out and "holds" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "segrecalc", "compute", "--scene", str(SCENES / "two_hyperplanes_p2.json")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coefficients"][-1]["value"] == "-4"


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
