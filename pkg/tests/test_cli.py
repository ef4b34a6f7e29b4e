import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from dbclock.cli import SERIES_HEADER, main

DATA = Path(__file__).parent / "data"
CONFIGS = Path(__file__).parent.parent / "configs"

POSITIVE = """[lattice]
N = 2048
L = 409.6
[packet]
k0 = 0.75
sigma_x = 10
content = positive
[engine]
t_final = 40
n_records = 257
"""


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def _write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_resonance_rows(capsys):
    assert main(["resonance", "--d", "3.84e5", "--mc2", "0.511", "--n", "1,2"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [int(r["n"]) for r in rows] == [1, 2]
    assert float(rows[0]["pc_res"]) == pytest.approx(161.746, rel=5e-4)
    assert float(rows[1]["pc_res"]) == pytest.approx(80.873, rel=5e-4)


def test_resonance_golden_bytes(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["resonance", "--n", "1,2,4", "--observed", "81.1", "--output", str(out)]) == 0
    assert out.read_bytes() == (DATA / "resonance_paper.csv").read_bytes()


def test_resonance_observed_json(capsys):
    assert main(["resonance", "--observed", "81.1", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["effective_mass"]["ratio"] == pytest.approx(1.0014, abs=1e-4)
    assert doc["effective_mass"]["ratio_sq"] == pytest.approx(1.0028, abs=1e-4)


def test_effective_mass_alias(capsys):
    assert main(["effective-mass", "--observed", "81.1"]) == 0
    a = capsys.readouterr().out
    assert main(["resonance", "--observed", "81.1"]) == 0
    assert capsys.readouterr().out == a
    assert main(["effective-mass"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["resonance", "--n", "0"],
        ["resonance", "--n", "x"],
        ["resonance", "--bogus"],
        ["resonance", "--precision", "0"],
        ["scan", "--lo", "1", "--hi", "2", "--steps", "1"],
        ["scan", "--lo", "2", "--hi", "1", "--steps", "10"],
        ["evolve", "/nonexistent/config.ini"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    err = capsys.readouterr().err
    assert err.startswith("error: ") and err.count("\n") == 1


@pytest.mark.parametrize("lo, hi, target", [(70, 90, 80.87), (150, 170, 161.75)])
def test_scan_minimum(lo, hi, target, capsys):
    assert main(["scan", "--lo", str(lo), "--hi", str(hi), "--steps", "2001"]) == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0] == "pc,delta_phi,mismatch"
    rows = _rows(text)
    assert len(rows) == 2001
    best = min(rows, key=lambda r: float(r["mismatch"]))
    assert float(best["pc"]) == pytest.approx(target, abs=0.01)


def test_evolve_csv_and_summary(tmp_path, capsys):
    cfg = _write(tmp_path, POSITIVE)
    out = tmp_path / "series.csv"
    assert main(["evolve", cfg, "--output", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    raw = out.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "t,norm,x_mean,p_mean,alpha_mean,beta_mean,E_mean,T_mean,phase_central"
    assert lines[0].split(",") == SERIES_HEADER
    assert len(lines) == 258
    # <p/E> of the projected sigma_x = 10 packet (quadrature value)
    assert summary["x_slope"] == pytest.approx(0.5988064662, rel=1e-8)
    assert summary["T_slope"] == pytest.approx(0.36, rel=1e-2)


def test_evolve_precision(tmp_path, capsys):
    cfg = _write(tmp_path, POSITIVE.replace("n_records = 257", "n_records = 5"))
    out = tmp_path / "s.csv"
    assert main(["evolve", cfg, "--output", str(out), "--precision", "4"]) == 0
    row = out.read_text().splitlines()[2].split(",")
    assert all(f"{float(v):.4g}" == v for v in row)


def test_evolve_without_output_sends_summary_to_stderr(tmp_path, capsys):
    cfg = _write(tmp_path, POSITIVE.replace("n_records = 257", "n_records = 4"))
    assert main(["evolve", cfg]) == 0
    cap = capsys.readouterr()
    assert cap.out.startswith("t,norm,")
    assert "x_slope" in json.loads(cap.err)


def test_evolve_mixed_frequency(capsys, tmp_path):
    out = tmp_path / "z.csv"
    assert main(["evolve", str(CONFIGS / "mixed_k0.ini"), "--output", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["zitter_omega"] == pytest.approx(2.0, rel=1e-2)


def test_evolve_runtime_escape_exit_3(tmp_path, capsys):
    text = "[lattice]\nN = 256\nL = 51.2\n[packet]\nk0 = 0.75\nsigma_x = 1\ncontent = mixed\n[engine]\nt_final = 40\nn_records = 41\n"
    assert main(["evolve", _write(tmp_path, text)]) == 3
    assert "packet escaped analysis window" in capsys.readouterr().err


def test_evolve_config_violation_names_invariant(tmp_path, capsys):
    assert main(["evolve", _write(tmp_path, "[packet]\nsigma_x = 0.1\n")]) == 2
    assert "sigma_x" in capsys.readouterr().err


@pytest.mark.parametrize("k0", ["0", "0.75"])
def test_zitter(k0, tmp_path, capsys):
    assert main(["zitter", "--k0", k0, "--output", str(tmp_path / "z.csv")]) == 0
    summary = json.loads(capsys.readouterr().out)
    expected = 2 * math.hypot(float(k0), 1.0)
    assert summary["zitter_omega_expected"] == pytest.approx(expected)
    assert summary["zitter_omega"] == pytest.approx(expected, rel=1e-2)


def test_clock_report_json(tmp_path, capsys):
    assert main(["clock", _write(tmp_path, POSITIVE)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ratio_x_over_T"] == pytest.approx(5 / 3, rel=1e-2)
    assert doc["v_ph_expected"] == pytest.approx(1.66666667, rel=1e-8)
    assert doc["phase_rate"] == pytest.approx(-0.8, rel=5e-3)
    assert doc["checks"]["phase_rate"]["pass"] is True
    assert doc["checks"]["slope_T"]["pass"] is True


def test_clock_requires_positive_packet(tmp_path, capsys):
    cfg = _write(tmp_path, POSITIVE.replace("content = positive", "content = mixed"))
    assert main(["clock", cfg]) == 2
    assert "requires positive-energy packet" in capsys.readouterr().err


def test_json_numbers_rounded_to_9_digits(capsys):
    main(["resonance", "--format", "json", "--n", "2"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["resonances"][0]["pc_res"] == 80.8735833


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dbclock", "resonance", "--n", "2"], capture_output=True, text=True, check=True
    )
    assert proc.stdout.splitlines()[0] == "n,beta_ph_res,pc_res,delta_T,delta_phi"
