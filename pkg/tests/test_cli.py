import json
import subprocess
import sys
from math import comb
from pathlib import Path

import pytest

from tighthilb.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

BAD_TEST_ELEMENT = """\
ring T = monomial_subring(F3, [a, b, c, d], [x^4, x^3*y, x*y^3, y^4]);
ideal Q = (a, d) in T;
assert test_element_generators Q;
analyze Q --depth 5 --emax 3 --test-element 1;
"""

MIXED_DIMENSION = """\
ring R = poly(F3, [x, y, z]) / ideal(x*z, y*z);
ideal Q = (x, y + z) in R;
assert standard_sop Q;
assert test_element_generators Q;
analyze Q --depth 6 --emax 3 --test-element x + y + z;
"""


def run(tmp_path, script, *extra):
    out = tmp_path / "report.json"
    code = main(["run", str(script), "--no-timestamp", "--out", str(out), *extra])
    return code, json.loads(out.read_text()) if out.exists() else None


def write(tmp_path, text, name="job.th"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_two_planes_report(tmp_path):
    code, doc = run(tmp_path, SAMPLES / "two_planes.th", "--csv", str(tmp_path / "t.csv"))
    assert code == 0
    a = doc["analyses"][0]
    assert doc["schema"] == "tight-hilbert/1" and doc["generated_at"] is None
    assert a["coefficients"] == {"e": [2, -1, 0], "e_star": [2, 0, -1]}
    assert a["tables"]["tight"]["fitted"] == [2, 0, -1]
    assert a["f_rationality"] == "NOT_F_RATIONAL"
    assert (tmp_path / "t.csv").read_text().startswith("n,length,status\n1,1,STABILIZED\n")
    assert (tmp_path / "t_ordinary.csv").read_text().splitlines()[1] == "1,3,EXACT"


def test_quartic_curve_report(tmp_path):
    code, doc = run(tmp_path, SAMPLES / "quartic_curve.th")
    assert code == 0
    tight = doc["analyses"][0]["tables"]["tight"]["values"]
    assert {int(n): v for n, v in tight.items()} == {n: 4 * comb(n + 1, 2) - 1 for n in range(1, 7)}
    assert doc["analyses"][0]["extension"]["gap"] == 1


def test_regular_report(tmp_path):
    code, doc = run(tmp_path, SAMPLES / "regular.th")
    assert code == 0
    assert doc["analyses"][0]["f_rationality"] == "F_RATIONAL"
    assert doc["analyses"][0]["test_element"]["provenance"] == "regular ring"


def test_reports_are_byte_identical(tmp_path):
    paths = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert main(["run", str(SAMPLES / "two_planes.th"), "--no-timestamp", "--out", str(out),
                     "--depth", "5"]) == 0
        paths.append(out.read_bytes().replace(str(out).encode(), b"OUT"))
    assert paths[0] == paths[1]


def test_failed_checks_exit_2(tmp_path):
    code, doc = run(tmp_path, write(tmp_path, BAD_TEST_ELEMENT))
    assert code == 2 and doc["exit_code"] == 2
    assert doc["analyses"][0]["f_rationality"] == "INCONCLUSIVE"


def test_inconclusive_exit_3(tmp_path):
    code, doc = run(tmp_path, write(tmp_path, MIXED_DIMENSION))
    assert code == 3
    assert doc["analyses"][0]["cohomology"]["status"] == "CONTRADICTED"


def test_json_to_stdout(tmp_path, capsys):
    assert main(["run", str(SAMPLES / "regular.th"), "--no-timestamp", "--depth", "5"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["analyses"][0]["config"]["N"] == 5


@pytest.mark.parametrize("source, code", [
    ("ring R = poly(F6, [x]);", "NOT_PRIME"),
    ("ideal Q = (x) in R;", "UNDEFINED_IDENTIFIER"),
    ("ring R = poly(F3, [x])", "SYNTAX_ERROR"),
])
def test_check_reports_errors_as_json(tmp_path, capsys, source, code):
    assert main(["check", str(write(tmp_path, source))]) == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == code and err["line"] == 1


def test_check_accepts_samples(capsys):
    for name in ("two_planes.th", "quartic_curve.th", "regular.th"):
        assert main(["check", str(SAMPLES / name)]) == 0
    assert "ok" in capsys.readouterr().out


def test_emax_below_two_is_rejected(tmp_path, capsys):
    assert main(["run", str(SAMPLES / "two_planes.th"), "--emax", "1"]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "PARAMETER_ERROR"


def test_missing_script(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.th")]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "IO_ERROR"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tighthilb.cli", "check", str(SAMPLES / "regular.th")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
