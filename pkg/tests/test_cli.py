import json
import math

import numpy as np
import pytest

from magbloch.cli import main

HARPER_CFG = {
    "lattice": {"a": [1.0, 0.0], "b": [0.0, 1.0]},
    "V": [[1, 0, 1.0, 0.0], [-1, 0, 1.0, 0.0],
          [0, 1, 1.0, 0.0], [0, -1, 1.0, 0.0]],
}


def _write_cfg(tmp_path, extra=None, name="cfg.json"):
    cfg = dict(HARPER_CFG)
    if extra:
        cfg.update(extra)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def test_unknown_key_rejected(tmp_path, capsys):
    path = _write_cfg(tmp_path, {"frobnicate": 1})
    assert main(["butterfly", "--config", path]) == 2
    assert "unknown config keys" in capsys.readouterr().err


def test_missing_file_rejected(tmp_path):
    assert main(["butterfly", "--config", str(tmp_path / "nope.json")]) == 2


def test_qmax_cap(tmp_path):
    path = _write_cfg(tmp_path)
    assert main(["butterfly", "--config", path, "--qmax", "500"]) == 4


def test_gauge_violation_is_config_error(tmp_path):
    path = _write_cfg(tmp_path, {"A1": [[1, 1, 1.0, 0.0], [-1, -1, 1.0, 0.0]]})
    assert main(["two-band", "--config", path, "--delta", "1/2"]) == 2


def test_butterfly_csv_deterministic(tmp_path):
    path = _write_cfg(tmp_path)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    for out in (out1, out2):
        rc = main(["butterfly", "--config", path, "--qmax", "2",
                   "--out", str(out)])
        assert rc == 0
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    lines = b1.decode().splitlines()
    assert lines[0] == "p,q,theta,band_index,E_min,E_max"
    # q_max=1 rows: single band [-4, 4]
    row = lines[1].split(",")
    assert row[:3] == ["0", "1", "0"]
    assert float(row[4]) == pytest.approx(-4.0)
    assert float(row[5]) == pytest.approx(4.0)
    # theta=1/2 rows with edges +-2 sqrt
    half = [ln.split(",") for ln in lines[2:]]
    assert [r[:2] for r in half] == [["1", "2"], ["1", "2"]]
    s = 2 * math.sqrt(2)
    assert float(half[0][4]) == pytest.approx(-s, abs=1e-9)
    assert float(half[1][5]) == pytest.approx(s, abs=1e-9)


def test_butterfly_json_format(tmp_path):
    path = _write_cfg(tmp_path)
    out = tmp_path / "a.json"
    assert main(["butterfly", "--config", path, "--qmax", "1",
                 "--format", "json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload[0]["q"] == 1
    assert payload[0]["bands"][0] == [-4.0, 4.0]


def test_effective_command(tmp_path):
    path = _write_cfg(tmp_path)
    out = tmp_path / "eff.csv"
    assert main(["effective", "--config", path, "--delta", "1/4",
                 "--band", "0", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "p,q,theta,band_index,E_min,E_max"
    assert len(rows) > 1


def test_two_band_constant_coupling(tmp_path):
    path = _write_cfg(tmp_path, {
        "A1": [[0, 0, 0.6, 0.0]],
        "A2": [[0, 0, -0.2, 0.0]],
    })
    out = tmp_path / "tb.json"
    assert main(["two-band", "--config", path, "--delta", "1/3",
                 "--band", "1", "--format", "json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    meta = payload[0]["metadata"]
    assert meta["ggdag_max_discrepancy"] < 1e-10
    gamma = complex(0.6, 0.2) / math.sqrt(2)  # z_a (f1 - i f2)/sqrt2 on square
    d2 = 1.0 / 3.0
    root = math.sqrt(0.25 + d2 * 2.0 * abs(gamma) ** 2)
    los = [b[0] for b in payload[0]["bands"]]
    his = [b[1] for b in payload[0]["bands"]]
    assert min(los) == pytest.approx(2.0 - root, abs=1e-10)
    assert max(his) == pytest.approx(2.0 + root, abs=1e-10)


def test_sapt_command(tmp_path):
    path = _write_cfg(tmp_path)
    out = tmp_path / "sapt.json"
    assert main(["sapt", "--config", path, "--band", "0",
                 "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["natural"] == 1
    assert payload["checks"]["h1_norm"] < 1e-12
    assert payload["checks"]["h3_norm"] < 1e-12
    assert payload["checks"]["h2_minus_V"] < 1e-12
    assert payload["checks"]["h4_minus_closed_form"] < 1e-10
    assert max(payload["pi_residuals"]["idempotency"]) < 1e-10
    assert max(payload["u_residuals"]["unitarity"]) < 1e-10


def test_oracle_compare_command(tmp_path):
    path = _write_cfg(tmp_path, {"n_max": 16})
    out = tmp_path / "oc.json"
    assert main(["oracle-compare", "--config", path,
                 "--delta", "1/16,1/31,1/64", "--band", "0",
                 "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert len(payload) == 3
    assert payload[0]["slope_so_far"] is None
    assert payload[-1]["slope_so_far"] >= 4.5
    assert payload[0]["hausdorff"] > payload[-1]["hausdorff"]


def test_oracle_compare_gap_closed(tmp_path):
    cfg = dict(HARPER_CFG)
    cfg["V"] = [[n, m, 3 * c, 0.0] for n, m, c, _ in HARPER_CFG["V"]]
    path = tmp_path / "strong.json"
    path.write_text(json.dumps(cfg))
    rc = main(["oracle-compare", "--config", str(path),
               "--delta", "4/5,3/5,2/5", "--band", "0"])
    assert rc == 3


def test_units_flag_rescales(tmp_path):
    path = _write_cfg(tmp_path)
    out_c = tmp_path / "c.json"
    out_b = tmp_path / "b.json"
    for units, out in [("cyclotron", out_c), ("bare", out_b)]:
        assert main(["effective", "--config", path, "--delta", "1/4",
                     "--band", "0", "--format", "json", "--units", units,
                     "--out", str(out)]) == 0
    cyc = json.loads(out_c.read_text())[0]["bands"]
    bare = json.loads(out_b.read_text())[0]["bands"]
    for (lo_c, hi_c), (lo_b, hi_b) in zip(cyc, bare):
        assert lo_b == pytest.approx(4.0 * lo_c)
        assert hi_b == pytest.approx(4.0 * hi_c)


def test_threads_deterministic(tmp_path):
    path = _write_cfg(tmp_path)
    outs = []
    for t in ("1", "3"):
        out = tmp_path / f"t{t}.csv"
        assert main(["butterfly", "--config", path, "--qmax", "3",
                     "--threads", t, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
