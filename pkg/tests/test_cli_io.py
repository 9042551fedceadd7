import json
import math

import numpy as np
import pytest

from entanglab.cli import main
from entanglab.io import (
    format_value,
    read_matrix_records,
    sidecar_path,
    write_csv,
    write_matrix_records,
)

def test_format_value():
    assert format_value(0.5) == "0.5"
    assert format_value(np.float64(1.25)) == "1.25"
    assert format_value(3) == "3"
    assert format_value(True) == "true"
    assert format_value("x") == "x"


def test_csv_writer_rfc4180(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(path, ["a", "b"], [(1, 0.5), (2, 0.25)])
    data = path.read_bytes()
    assert data == b"a,b\r\n1,0.5\r\n2,0.25\r\n"


def test_matrix_records_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    mats = [
        rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)),
        rng.standard_normal((2, 5)) + 1j * rng.standard_normal((2, 5)),
    ]
    path = tmp_path / "m.bin"
    write_matrix_records(path, mats)
    back = read_matrix_records(path)
    assert len(back) == 2
    for a, b in zip(mats, back):
        assert np.array_equal(a, b)
    # documented layout: 16-byte header then interleaved float64 pairs
    blob = path.read_bytes()
    rows = int.from_bytes(blob[:8], "little")
    cols = int.from_bytes(blob[8:16], "little")
    assert (rows, cols) == (3, 3)
    first = np.frombuffer(blob, dtype="<f8", count=2, offset=16)
    assert first[0] == mats[0][0, 0].real and first[1] == mats[0][0, 0].imag


def test_sidecar_path():
    assert str(sidecar_path("out/run.csv")).endswith("run.meta.json")
    assert str(sidecar_path("out/run")).endswith("run.meta.json")


# -- CLI ---------------------------------------------------------------------------


def test_cli_sample_csv_and_bin(tmp_path):
    out = tmp_path / "eigs.csv"
    rc = main(["sample", "--ensemble", "gue0", "--n", "4", "--trials", "2",
               "--seed", "3", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "trial,index,value"
    assert len(lines) == 1 + 2 * 4

    binout = tmp_path / "draws.bin"
    rc = main(["sample", "--ensemble", "induced", "--n", "4", "--s", "6",
               "--trials", "3", "--seed", "3", "--format", "bin", "--out", str(binout)])
    assert rc == 0
    mats = read_matrix_records(binout)
    assert len(mats) == 3
    assert all(abs(np.trace(m) - 1) < 1e-12 for m in mats)

    rc = main(["sample", "--ensemble", "ginibre", "--n", "3", "--s", "4",
               "--trials", "1", "--seed", "0", "--out", str(tmp_path / "x.csv")])
    assert rc == 2  # eigenvalue CSV undefined for non-hermitian draws


def test_cli_gauge_bell_direction(tmp_path, capsys):
    phi = np.zeros(4, dtype=complex)
    phi[0] = phi[3] = 1 / math.sqrt(2)
    A = np.outer(phi, phi.conj()) - np.eye(4) / 4
    path = tmp_path / "a.bin"
    write_matrix_records(path, [A])
    rc = main(["gauge", "--input", str(path), "--body", "s0", "--dims", "2,2"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["value"] == pytest.approx(3.0, abs=1e-6)
    assert payload["evals"] > 0
    assert payload["bracket_width"] <= 1e-7

    rc = main(["gauge", "--input", str(path), "--body", "d0", "--dims", "2,2"])
    payload = json.loads(capsys.readouterr().out)
    assert rc == 0 and payload["value"] == pytest.approx(1.0, abs=1e-10)


def test_cli_geometry_checks(tmp_path, capsys):
    rc = main(["geometry", "--check", "vrad", "--n", "2"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["vrad"] == pytest.approx(1 / math.sqrt(2), rel=1e-10)

    rc = main(["geometry", "--check", "zvol", "--n", "2", "--s", "3"])
    payload = json.loads(capsys.readouterr().out)
    assert math.exp(payload["log_znorm"]) == pytest.approx(math.pi * math.sqrt(2) / 30, rel=1e-10)

    rc = main(["geometry", "--check", "sep-bounds", "--k", "2", "--d", "2"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["beta_d"] == pytest.approx(0.18872, abs=5e-6)

    out = tmp_path / "urysohn.json"
    rc = main(["geometry", "--check", "urysohn", "--n", "3", "--trials", "500",
               "--seed", "1", "--out", str(out)])
    assert rc == 0
    payload = json.loads(out.read_text())
    assert payload["passed"] is True

    rc = main(["geometry", "--check", "rogers-shephard", "--m", "2",
               "--points", "2000", "--seed", "2"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["ratio"] >= payload["threshold"]


def test_cli_scan_threshold_and_run(tmp_path):
    out = tmp_path / "scan"
    rc = main(["scan-threshold", "--dims", "2,2", "--criterion", "exact",
               "--s-values", "2,8", "--trials", "25", "--seed", "4", "--out", str(out)])
    assert rc == 0
    text = (tmp_path / "scan.csv").read_text()
    assert text.startswith("s,trials,successes,p_hat")

    cfg = {
        "experiment": "threshold-scan",
        "dims": [2, 2],
        "s_values": [2, 8],
        "criterion": "exact",
        "trials": 25,
        "master_seed": 4,
        "output": str(tmp_path / "run_out"),
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    rc = main(["run", str(cfg_path)])
    assert rc == 0
    # the CLI flags and the config file describe the same experiment
    assert (tmp_path / "run_out.csv").read_bytes() == (tmp_path / "scan.csv").read_bytes()


def test_cli_estimate_s0(capsys):
    rc = main(["estimate-s0", "--d", "2", "--trials", "300", "--seed", "8"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert 3 < payload["value"] < 15

    rc = main(["estimate-s0", "--d", "3", "--ppt", "--trials", "100", "--seed", "8"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "ppt"
    assert 15 < payload["threshold"]["mean"] < 55  # ~ 4 d^2 = 36


def test_cli_spectral_and_monotonicity(tmp_path):
    rc = main(["spectral", "--ensemble", "gue0", "--n", "16", "--trials", "4",
               "--seed", "0", "--out", str(tmp_path / "sp")])
    assert rc == 0
    lines = (tmp_path / "sp.csv").read_text().strip().splitlines()
    assert lines[0] == "trial,n,s,ensemble,dinf,alpha,beta,lambda_max,lambda_min"
    assert len(lines) == 5

    rc = main(["monotonicity", "--mode", "projection", "--d1", "2", "--d2", "3",
               "--s", "10", "--trials", "50", "--seed", "0", "--out", str(tmp_path / "mono")])
    assert rc == 0
    meta = json.loads((tmp_path / "mono.meta.json").read_text())
    assert meta["extra"]["ordering_holds_2sigma"] is True


def test_cli_error_handling(tmp_path, capsys):
    assert main(["scan-threshold", "--dims", "2,2", "--criterion", "exact",
                 "--s-values", "4", "--trials", "5", "--seed", "0"]) == 2  # no --out
    capsys.readouterr()
    assert main(["sample", "--ensemble", "induced", "--n", "4", "--trials", "1",
                 "--seed", "0", "--out", str(tmp_path / "y.csv")]) == 2  # missing --s
    capsys.readouterr()
    assert main(["gauge", "--input", str(tmp_path / "nope.bin"), "--body", "d0",
                 "--dims", "2,2"]) == 2  # missing input file
    assert "error" in capsys.readouterr().err
