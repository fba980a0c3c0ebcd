import json
import subprocess
import sys

import pytest

from qbrst.bundled import sl2_doc
from qbrst.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_bundled(capsys):
    code, out, _ = run(capsys, "validate", "sl2.json", "--no-timing")
    assert code == 0
    assert out.count("[PASS") >= 7 and "0 failed" in out


def test_validate_perturbed_file(tmp_path, capsys):
    doc = sl2_doc()
    doc["c"][0][3] = "3"
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 1 and "witness" in out


def test_malformed_scalar_exits_two(tmp_path, capsys):
    doc = sl2_doc()
    doc["c"][0][3] = "two"
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2 and "c[0]" in err


@pytest.mark.parametrize("name, height", [("sl2", "3"), ("hecke2", "2"), ("abelian1", "1")])
def test_height(capsys, name, height):
    code, out, _ = run(capsys, "height", f"{name}.json", "--no-timing")
    assert code == 0 and f"height {height}" in out


def test_brst_dump_round_trips(tmp_path, capsys):
    from qbrst.scalars import parse_scalar

    dump = tmp_path / "coeffs.json"
    code, out, _ = run(capsys, "brst", "sl2.json", "--mode", "both", "--dump", str(dump), "--no-timing")
    assert code == 0 and "brst_constructions_agree" in out
    doc = json.loads(dump.read_text())
    assert doc["coefficients"]["1"]
    for _, _, s in doc["coefficients"]["1"]:
        assert parse_scalar(s) != 0


def test_hecke_coefficients_vanish(capsys, tmp_path):
    dump = tmp_path / "h.json"
    code, _, _ = run(capsys, "brst", "hecke2.json", "--mode", "explicit", "--dump", str(dump))
    assert code == 0
    assert all(not v for v in json.loads(dump.read_text())["coefficients"].values())


def test_verify_with_specialization(capsys):
    code, out, _ = run(capsys, "verify", "hecke2.json", "--suite", "all", "--q", "2", "--no-timing")
    assert code == 0 and "0 failed" in out


def test_q_requires_laurent_file(capsys):
    code, _, err = run(capsys, "verify", "sl2.json", "--q", "2")
    assert code == 2 and "laurent" in err


def test_bad_options_exit_two(capsys):
    assert run(capsys, "verify", "sl2.json", "--suite", "everything")[0] == 2
    assert run(capsys, "verify", "sl2.json", "--max-degree", "0")[0] == 2


def test_grading_suite(capsys):
    code, out, _ = run(capsys, "verify", "gl11.json", "--suite", "grading", "--no-timing")
    assert code == 0 and "twisted_super_permutation" in out


def test_reports_are_deterministic(tmp_path, capsys, monkeypatch):
    paths = []
    for threads in ("1", "3"):
        monkeypatch.setenv("QBRST_THREADS", threads)
        p = tmp_path / f"r{threads}.json"
        assert run(capsys, "verify", "sl2.json", "--no-timing", "--report", str(p))[0] == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    report = json.loads(paths[0].read_text())
    assert report["summary"]["fail"] == 0


def test_bad_thread_setting(capsys, monkeypatch):
    monkeypatch.setenv("QBRST_THREADS", "many")
    assert run(capsys, "verify", "abelian1.json", "--suite", "braid")[0] == 2


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "qbrst.cli", "height", "sl2.json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "height 3" in proc.stdout
