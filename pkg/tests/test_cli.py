import csv
from fractions import Fraction

import numpy as np
import pytest

from conftest import RP2_FACETS
from nctopo.cli import main
from nctopo.simplicial import from_facets, hollow_tetrahedron, write_complex_file


@pytest.fixture()
def tetra_file(tmp_path):
    path = tmp_path / "tetra.txt"
    write_complex_file(hollow_tetrahedron(), path)
    return path


def test_betti_spectral_report(tetra_file, capsys):
    rc = main(["betti", "--input", str(tetra_file), "--engine", "spectral"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "faces: (4, 6, 4)" in out
    assert "betti (spectral): (1, 0, 1)" in out
    assert "2 0 1" in out and "2 4 3" in out  # quarter zero-atom, rest at 4
    assert "euler characteristic: 2 (faces) = 2 (betti)" in out


def test_betti_snf_report(tetra_file, capsys):
    rc = main(["betti", "--input", str(tetra_file), "--ring", "z"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "betti (z): (1, 0, 1)" in out
    assert "divisors d_1: [1, 1, 1]" in out


def test_betti_torsion_note(tmp_path, capsys):
    path = tmp_path / "rp2.txt"
    write_complex_file(from_facets(RP2_FACETS), path)
    rc = main(["betti", "--input", str(path), "--ring", "gf2"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "betti (gf2): (1, 1, 1)" in out
    assert "torsion" in out and "[2]" in out


def test_betti_parse_failure_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\noops\n")
    rc = main(["betti", "--input", str(bad)])
    assert rc == 2
    assert "line 2" in capsys.readouterr().err


def test_cloud_deterministic_bytes(tmp_path, capsys):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["cloud", "--kind", "disk", "--n", "80", "--seed", "9",
                 "--output", str(out1)]) == 0
    assert main(["cloud", "--kind", "disk", "--n", "80", "--seed", "9",
                 "--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    rows = out1.read_text().strip().splitlines()
    assert len(rows) == 80 and all(len(r.split(",")) == 2 for r in rows)


def test_cloud_requires_seed(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["cloud", "--kind", "disk", "--n", "10", "--output", str(tmp_path / "x.csv")])
    assert exc.value.code == 2


def test_torus_cloud_on_surface_via_cli(tmp_path):
    out = tmp_path / "torus.csv"
    rc = main(["cloud", "--kind", "torus-rep", "--n", "60", "--seed", "4",
               "--R", "2", "--r", "1", "--output", str(out)])
    assert rc == 0
    pts = np.array([[float(x) for x in row.split(",")] for row in out.read_text().splitlines()])
    err = (np.sqrt(pts[:, 0] ** 2 + pts[:, 1] ** 2) - 2.0) ** 2 + pts[:, 2] ** 2 - 1.0
    assert np.max(np.abs(err)) < 1e-9


def test_curves_outputs(tmp_path, capsys):
    cloud = tmp_path / "square.csv"
    cloud.write_text("0,0\n1,0\n1,1\n0,1\n")
    prefix = tmp_path / "sq"
    rc = main(["curves", "--input", str(cloud), "--output", str(prefix),
               "--grid", "0.1:0.8:8", "--maxdim", "1"])
    assert rc == 0
    with open(f"{prefix}_curves.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert rows and set(rows[0]) == {"t", "b0", "b1"}
    # the square's hole: some grid row with b0=1, b1=1
    assert any(r["b0"] == "1" and r["b1"] == "1" for r in rows)
    # CSV round-trips losslessly through repr floats
    ts = [float(r["t"]) for r in rows]
    assert ts == sorted(ts)
    with open(f"{prefix}_bars.csv") as fh:
        bars = list(csv.DictReader(fh))
    assert any(b["dim"] == "1" for b in bars)
    svg = open(f"{prefix}_curves.svg").read()
    assert svg.startswith("<svg") and "polyline" in svg
    assert open(f"{prefix}_barcode.svg").read().startswith("<svg")


def test_curves_cap_exit_code(tmp_path, capsys):
    rng = np.random.default_rng(0)
    cloud = tmp_path / "dense.csv"
    pts = rng.normal(size=(60, 2))
    cloud.write_text("\n".join(",".join(repr(float(x)) for x in p) for p in pts) + "\n")
    rc = main(["curves", "--input", str(cloud), "--output", str(tmp_path / "d"),
               "--grid", "0.1:9.0:4", "--maxdim", "2"])
    assert rc == 4
    assert "cap exceeded at t=" in capsys.readouterr().err


def test_cumulants_round_trip(tmp_path, capsys):
    moments = tmp_path / "m.csv"
    moments.write_text("0\n1\n0\n1\n0\n1\n")
    out = tmp_path / "c.csv"
    rc = main(["cumulants", "--input", str(moments), "--kind", "boolean",
               "--direction", "to-cumulants", "--output", str(out)])
    assert rc == 0
    assert out.read_text().split() == ["0", "1", "0", "0", "0", "0"]
    back = tmp_path / "m2.csv"
    rc = main(["cumulants", "--input", str(out), "--kind", "boolean",
               "--direction", "to-moments", "--output", str(back)])
    assert rc == 0
    assert [Fraction(x) for x in back.read_text().split()] == [0, 1, 0, 1, 0, 1]


def test_cumulants_exact_rationals(tmp_path, capsys):
    moments = tmp_path / "m.csv"
    moments.write_text("1/2\n5/4\n-3/8\n")
    rc = main(["cumulants", "--input", str(moments), "--kind", "free",
               "--direction", "to-cumulants"])
    out = capsys.readouterr().out
    assert rc == 0
    # c1 = 1/2, c2 = m2 - m1^2 = 1, c3 = m3 - 3 c1 c2 - c1^3 = -2
    assert "1/2, 1, -2" in out


def test_cumulants_bad_rational_exit_code(tmp_path, capsys):
    moments = tmp_path / "m.csv"
    moments.write_text("1/2\nbanana\n")
    rc = main(["cumulants", "--input", str(moments), "--kind", "free",
               "--direction", "to-cumulants"])
    assert rc == 2
    assert "banana" in capsys.readouterr().err


def test_cumulants_size_cap_exit_code(tmp_path, capsys):
    moments = tmp_path / "m.csv"
    moments.write_text("\n".join(["0"] * 15) + "\n")
    rc = main(["cumulants", "--input", str(moments), "--kind", "classical",
               "--direction", "to-cumulants"])
    assert rc == 4
