import subprocess
import sys

import numpy as np
import pytest

from slabbeam.cli import run
from slabbeam.fieldmap import LineCut, detect_peaks
from slabbeam.output import read_csv, read_pgm


def rows(text):
    lines = text.strip().splitlines()
    names = lines[0].split(",")
    return [dict(zip(names, map(float, ln.split(",")))) for ln in lines[1:]]


def test_coeffs_row(capsys):
    code = run(["coeffs", "--n-ratio", "0.8660254", "--theta0", "0.7853982", "--L", "4", "--delta", "50"])
    assert code == 0
    (row,) = rows(capsys.readouterr().out)
    assert row["regime"] == 1
    assert f"{row['R2_plus_T2']:.12f}" == "1.000000000000"
    assert row["R2"] + row["T2"] == pytest.approx(1, abs=1e-12)


def test_coeffs_particle_and_degrees(capsys):
    assert run(["coeffs", "--theta0-deg", "45", "--particle"]) == 0
    (row,) = rows(capsys.readouterr().out)
    assert row["sumR2"] == pytest.approx(0.057191, abs=1e-5)
    assert row["sumT2"] == pytest.approx(0.942809, abs=1e-5)


def test_coeffs_orders_and_resonances(capsys):
    assert run(["coeffs", "--orders", "3"]) == 0
    assert [r["n"] for r in rows(capsys.readouterr().out)] == [0, 1, 2, 3]
    assert run(["coeffs", "--resonances", "3"]) == 0
    out = rows(capsys.readouterr().out)
    assert [r["delta_L"] for r in out] == pytest.approx([2 * np.pi, 4 * np.pi, 6 * np.pi])
    assert all(r["T2"] == pytest.approx(1, abs=1e-9) for r in out)


def test_tunneling_orders_exit_two(capsys):
    assert run(["coeffs", "--n-ratio", "0.5", "--orders", "10"]) == 2
    err = capsys.readouterr().err
    assert "diverges" in err and "analytic continuation" in err


def test_empty_map_exits_one(capsys):
    assert run(["map", "--ny", "0", "--nz", "0"]) == 1
    assert "error" in capsys.readouterr().err


def test_usage_errors_exit_one(capsys):
    assert run([]) == 1
    assert run(["coeffs", "--delta", "abc"]) == 1
    assert run(["coeffs", "--delta", "-1"]) == 1
    assert run(["coeffs", "--theta0", "1", "--theta0-deg", "45"]) == 1
    assert run(["scan", "--format", "pgm"]) == 1


def test_regime_errors_exit_two(capsys):
    assert run(["coeffs", "--n-ratio", "0.5", "--particle"]) == 2
    assert run(["coeffs", "--n-ratio", "0.5", "--resonances", "2"]) == 2
    assert run(["beams", "--n-ratio", "0.5"]) == 2


def test_io_error_exits_three(tmp_path, capsys):
    assert run(["coeffs", "--out", str(tmp_path / "nope" / "x.csv")]) == 3
    assert "I/O" in capsys.readouterr().err


def test_under_resolved_map_exits_four(tmp_path, capsys):
    code = run(["map", "--y-max", "400", "--ny", "4", "--nz", "4", "--out", str(tmp_path / "m.pgm")])
    assert code == 4
    assert "y_d=400" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    assert "coeffs" in capsys.readouterr().out


def test_map_writes_pgm_and_csv(tmp_path):
    pgm, csv = tmp_path / "m.pgm", tmp_path / "m.csv"
    args = ["map", "--ny", "24", "--nz", "16", "--bit-depth", "8", "--out", str(pgm), "--csv", str(csv)]
    assert run(args) == 0
    pix, mv = read_pgm(pgm)
    assert pix.shape == (24, 16) and mv == 255 and pix.max() == 255
    table = read_csv(csv)
    assert len(table["intensity"]) == 24 * 16


def test_scan_defaults(capsys):
    assert run(["scan", "--L-count", "21"]) == 0
    out = rows(capsys.readouterr().out)
    assert len(out) == 21
    assert out[0]["T_wave"] == pytest.approx(1) and out[-1]["T_wave"] == pytest.approx(1)


def test_cuts_and_peaks(capsys):
    assert run(["cuts", "--samples", "300", "--to", "32"]) == 0
    out = rows(capsys.readouterr().out)
    assert len(out) == 300 and "y_d" in out[0]
    assert run(["cuts", "--samples", "800", "--to", "32", "--peaks", "--threshold", "1e-8", "--smooth", "0.5"]) == 0
    assert len(rows(capsys.readouterr().out)) >= 3


def test_beams_table(capsys):
    assert run(["beams", "--orders", "1", "--samples", "801"]) == 0
    out = rows(capsys.readouterr().out)
    assert [(r["kind"], r["n"]) for r in out] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    for r in out:
        assert r["power_fraction"] == pytest.approx(r["particle_limit"], rel=0.15)


def test_console_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "slabbeam.cli", "coeffs"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0 and res.stdout.startswith("alpha,")


def test_identical_argv_gives_identical_bytes(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"m{k}.pgm"
        assert run(["map", "--ny", "40", "--nz", "30", "--out", str(path), "--workers", str(1 + 3 * k)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_rendered_pgm_shows_three_transmitted_stripes(tmp_path):
    path = tmp_path / "zebra.pgm"
    args = ["map", "--ny", "512", "--nz", "64", "--z-min", "4.4", "--z-max", "5.0",
            "--bit-depth", "16", "--gamma", "0.25", "--out", str(path)]
    assert run(args) == 0
    pix, _ = read_pgm(path)
    y = np.linspace(-4, 32.5, 512)
    col = LineCut("fixed_z", 4.5, y, pix[:, 10].astype(float))
    peaks = detect_peaks(col, 1e-3, smooth=0.5)
    assert len(peaks) >= 3
