import json
import math

import numpy as np
import pytest

from patmsts import cli
from patmsts.fock_oracle import build_patmsts, oracle_wigner
from patmsts.state_params import StateParams
from patmsts.verification import run_suite


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = cli.main([*argv, "--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def rows(text):
    lines = text.strip("\n").split("\n")
    return lines[0], [line.split(",") for line in lines[1:]]


def test_table_header_and_order(tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"mn_pairs": [[1, 1], [0, 1]], "nbars": [0.5, 0.01],
                               "r_min": 0.1, "r_max": 0.3, "r_step": 0.1}))
    code, text = run(tmp_path, "table", "--config", str(cfg), "--quantity", "SV")
    assert code == 0
    header, body = rows(text)
    assert header == "m,n,r,nbar,quantity,value"
    keys = [(int(m), int(n), float(nb), float(r)) for m, n, r, nb, _, _ in body]
    assert keys == sorted(keys) and len(keys) == 12
    assert all(q == "SV" for *_, q, _ in body)


def test_table_fig1_sweep_is_deterministic(tmp_path):
    args = ("table", "--m", "1", "--n", "2", "--nbar", "0.01", "--r-min", "0.05", "--r-max", "1.5", "--r-step", "0.01")
    _, a = run(tmp_path, *args, name="a.csv")
    _, b = run(tmp_path, *args, name="b.csv")
    assert a == b and "\r" not in a
    _, body = rows(a)
    assert len(body) == 146
    assert float(body[0][2]) == 0.05 and float(body[-1][2]) == 1.5
    # 17 significant digits round-trip exactly
    value = body[10][5]
    assert repr(float(value)) == repr(float(format(float(value), ".17g")))


def test_table_json_format(tmp_path):
    code, text = run(tmp_path, "table", "--quantity", "fidelity", "--format", "json", "--m", "0", "--n", "0",
                     "--nbar", "0", "--r-min", "0", "--r-max", "0", "--r-step", "0.1", name="t.json")
    assert code == 0
    data = json.loads(text)
    assert data == [{"m": 0, "n": 0, "r": 0.0, "nbar": 0.0, "quantity": "fidelity", "value": pytest.approx(0.5)}]


def test_thresholds(tmp_path):
    code, text = run(tmp_path, "thresholds", "--m", "0", "--n", "1", "--nbar", "1")
    assert code == 0
    header, body = rows(text)
    assert header == "m,n,nbar,r_a,r_c"
    assert float(body[0][4]) == pytest.approx(0.5 * math.log(3), abs=1e-12)
    assert 0 < float(body[0][3]) < float(body[0][4])
    _, text = run(tmp_path, "thresholds", "--m", "0", "--n", "1", "--nbar", "0", name="t0.csv")
    assert rows(text)[1][0][3] == "none"


def test_wigner_grid_output(tmp_path):
    code, text = run(tmp_path, "wigner", "--m", "0", "--n", "1", "--r", "0.3", "--nbar", "0.2")
    assert code == 0
    header, body = rows(text)
    assert header == "axis_kind,q,p,w"
    assert len(body) == 61 * 61
    w = np.array([float(row[3]) for row in body])
    q, p = (float(v) for v in body[int(np.argmin(w))][1:3])
    assert (q, p) == (0.0, 0.0) and w.min() < 0


def test_wigner_single_point_matches_oracle(tmp_path):
    code, text = run(tmp_path, "wigner", "--m", "1", "--n", "1", "--r", "0.3", "--nbar", "1", "--grid", "1",
                     "--axis", "diff")
    assert code == 0
    _, body = rows(text)
    assert len(body) == 1 and body[0][0] == "diff"
    rho, _, _ = build_patmsts(StateParams(1, 1, 0.3, 1.0))
    assert float(body[0][3]) == pytest.approx(oracle_wigner(rho, 0, 0), abs=1e-6)


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"m": 2, "n": 2, "r": 0.9, "nbar": 0.5, "grid": 3}))
    code, text = run(tmp_path, "wigner", "--config", str(cfg), "--grid", "1")
    assert code == 0 and len(rows(text)[1]) == 1


@pytest.mark.parametrize("argv", [
    ["table", "--r-step", "0"],
    ["table", "--r-min", "1", "--r-max", "0.5"],
    ["table", "--m", "-1"],
    ["wigner", "--grid", "0"],
    ["table", "--quantity", "entropy"],
    ["frobnicate"],
])
def test_invalid_config_exit_code(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code = cli.main(argv)
        raise SystemExit(code)
    assert exc.value.code == cli.EXIT_CONFIG


def test_bad_config_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"unknown_key": 1}')
    assert cli.main(["table", "--config", str(bad)]) == cli.EXIT_CONFIG
    bad.write_text("not json")
    assert cli.main(["table", "--config", str(bad)]) == cli.EXIT_CONFIG


def test_io_failure_exit_code(tmp_path):
    assert cli.main(["table", "--out", str(tmp_path / "missing" / "x.csv")]) == cli.EXIT_IO
    assert cli.main(["table", "--config", str(tmp_path / "nope.json")]) == cli.EXIT_IO


def test_oracle_failure_exit_code(tmp_path, monkeypatch):
    monkeypatch.setenv("PATMSTS_MAX_DIM", "8")
    assert cli.main(["verify", "--profile", "smoke", "--out", str(tmp_path / "r.json")]) == cli.EXIT_ORACLE


def test_verify_smoke(tmp_path):
    code, text = run(tmp_path, "verify", "--profile", "smoke", name="report.json")
    assert code == 0
    report = json.loads(text)
    assert report["passed"] and report["elapsed_seconds"] < 10
    for entry in report["checks"] + report["paper-discrepancy"]:
        assert {"check", "tolerance", "deviation", "status"} <= set(entry)


def test_verify_desk_report():
    report = run_suite("desk")
    assert report["passed"], [c for c in report["checks"] if c["status"] != "pass"]
    assert report["n_checks"] >= 40
    disc = report["paper-discrepancy"]
    assert disc and all(d["status"] == "paper-discrepancy" for d in disc)
    thermal = [d for d in disc if "r=0 " in d["check"]]
    assert thermal and all(d["oracle_value"] == pytest.approx(1.0, abs=1e-9) for d in thermal)
    assert all(d["printed_value"] < 0 for d in thermal)
