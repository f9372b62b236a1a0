import json

import numpy as np
import pytest

from genburgers.cli import main
from genburgers.field import FieldSlice, read_slice_csv
from genburgers.studies import UsageError, parse_grid


@pytest.fixture
def box_spec(tmp_path):
    p = tmp_path / "box.json"
    p.write_text(json.dumps({"c": [1.0], "box": {"l": 1.0, "u0": [1.0]}}))
    return str(p)


def run(*argv):
    return main([str(a) for a in argv])


def test_parse_grid():
    assert parse_grid("-2:2:0.01").size == 401
    np.testing.assert_allclose(parse_grid("0:1:0.3"), [0.0, 0.3, 0.6, 0.9])
    np.testing.assert_allclose(parse_grid("0:1:0.4"), [0.0, 0.4, 0.8, 1.2])
    assert parse_grid("1:1:0.5").tolist() == [1.0]
    for bad in ("0:1", "0:1:0", "1:0:0.1", "a:1:0.1"):
        with pytest.raises(UsageError):
            parse_grid(bad)


def test_evaluate_inviscid_rows_and_sidecar(tmp_path, box_spec):
    out = tmp_path / "inv.csv"
    assert run("evaluate", "--evaluator", "inviscid", "--spec", box_spec, "--t", 2, "--x=-2:2:0.01", "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,u1,nonunique" and len(lines) == 402
    side = json.loads((tmp_path / "inv.csv.json").read_text())
    m = side["manifest"]
    assert m["command"] == "evaluate" and m["evaluator"] == "inviscid" and m["t"] == 2.0
    assert m["tool_version"] and m["timestamp"]


def test_missing_nu_is_usage_error(tmp_path, box_spec, capsys):
    code = run("evaluate", "--evaluator", "viscous", "--spec", box_spec, "--t", 1, "--x=-1:1:0.5")
    assert code == 2
    assert "--nu" in capsys.readouterr().err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["evaluate", "--evaluator", "nope"])
    assert exc.value.code == 2


def test_bad_spec_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run("evaluate", "--evaluator", "inviscid", "--spec", bad, "--t", 1, "--x=0:1:0.5") == 2
    assert run("evaluate", "--evaluator", "inviscid", "--spec", tmp_path / "missing.json", "--t", 1, "--x=0:1:0.5") == 1


def test_viscous_matches_box_closed_form(tmp_path, box_spec):
    v, b, rep = tmp_path / "v.csv", tmp_path / "b.csv", tmp_path / "gap.json"
    args = ["--spec", box_spec, "--t", 1, "--x=-3:3:0.05", "--nu", 0.1]
    assert run("evaluate", "--evaluator", "viscous", *args, "--out", v) == 0
    assert run("evaluate", "--evaluator", "box", *args, "--out", b) == 0
    assert run("compare", v, b, "--out", rep) == 0
    gap = json.loads(rep.read_text())
    assert gap["linf"][0] <= 1e-6
    assert gap["n_points"] == 121


def test_compare_self_and_mismatch(tmp_path, box_spec):
    a, c = tmp_path / "a.csv", tmp_path / "c.csv"
    run("evaluate", "--evaluator", "box", "--spec", box_spec, "--t", 2, "--x=-2:2:0.1", "--out", a)
    run("evaluate", "--evaluator", "box", "--spec", box_spec, "--t", 2, "--x=-2:2:0.2", "--out", c)
    rep = tmp_path / "self.json"
    assert run("compare", a, a, "--out", rep) == 0
    gap = json.loads(rep.read_text())
    assert gap["linf"] == [0.0] and gap["l1"] == [0.0]
    assert run("compare", a, c) == 2


def test_output_is_deterministic(tmp_path, box_spec):
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}.csv"
        run("evaluate", "--evaluator", "viscous", "--nu", 0.05, "--spec", box_spec, "--t", 1, "--x=-2:3:0.25", "--out", out)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert b"\r" not in outs[0]


def test_csv_roundtrip_is_exact(tmp_path):
    x = np.linspace(-1, 1, 7)
    u = np.column_stack([np.sin(x) / 3, np.exp(x) * 1e-7])
    FieldSlice(x, u, 0.3, np.array([0, 1, 0, 0, 0, 0, 1], bool)).write(tmp_path / "s.csv")
    back = read_slice_csv(tmp_path / "s.csv")
    np.testing.assert_array_equal(back.x, x)
    np.testing.assert_array_equal(back.u, u)
    assert back.t == 0.3 and back.nonunique.tolist() == [False, True, False, False, False, False, True]


def test_header_only_csv(tmp_path):
    FieldSlice(np.empty(0), np.empty((0, 2)), 1.0).write(tmp_path / "e.csv")
    back = read_slice_csv(tmp_path / "e.csv")
    assert len(back) == 0 and back.n == 2


def test_riemann_and_profile_evaluators(tmp_path):
    r = tmp_path / "r.json"
    r.write_text(json.dumps({"c": [1.0, 1.0], "riemann": {"uL": [0.0, 0.0], "uR": [1.0, 0.0]}}))
    out = tmp_path / "r.csv"
    assert run("evaluate", "--evaluator", "riemann", "--spec", r, "--t", 2, "--x=0:2:1", "--out", out) == 0
    sl = read_slice_csv(out)
    np.testing.assert_allclose(sl.u[1], [0.5, 0.0])
    assert run("evaluate", "--evaluator", "profile", "--spec", r, "--t", 2, "--x=0:2:1", "--nu", 1) == 1


def test_sweep_outputs(tmp_path, box_spec):
    out = tmp_path / "sw.csv"
    assert run("sweep", "--evaluator", "inviscid", "--spec", box_spec, "--times", "100,1000,10000", "--out", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,sup_u1,s_minus,s_plus" and len(lines) == 4
    summary = json.loads((tmp_path / "sw.csv.json").read_text())
    assert summary["decay"][0]["exponent"] == pytest.approx(-0.5, abs=0.02)
    assert summary["support_width"]["exponent"] == pytest.approx(0.5, abs=0.02)
    assert summary["manifest"]["t"] == [100.0, 1000.0, 10000.0]


def test_sweep_flat_box(tmp_path):
    spec = tmp_path / "flat.json"
    spec.write_text(json.dumps({"c": [1.0, 1.0], "box": {"l": 1.0, "u0": [1.0, -1.0]}}))
    out = tmp_path / "flat.csv"
    assert run("sweep", "--evaluator", "inviscid", "--spec", spec, "--times", "1,10,100", "--out", out) == 0
    summary = json.loads((tmp_path / "flat.csv.json").read_text())
    assert all(abs(f["exponent"]) <= 1e-6 for f in summary["decay"])


def test_sweep_rejects_decreasing_times(box_spec):
    assert run("sweep", "--evaluator", "inviscid", "--spec", box_spec, "--times", "10,1") == 2


def test_oracle_with_history(tmp_path, box_spec):
    out = tmp_path / "fd.csv"
    assert run("oracle", "--spec", box_spec, "--nu", 0.5, "--t", 0.2, "--x=-10:10:0.1", "--out", out,
               "--history-every", 100) == 0
    assert read_slice_csv(out).meta["manifest"]["evaluator"] == "fd"
    hist = (tmp_path / "fd.history.csv").read_text().splitlines()
    assert hist[0] == "t,x,u1"
    assert run("oracle", "--spec", box_spec, "--nu", 0.5, "--t", 1, "--x=-2:2:0.1") == 1


def test_report_subset(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert run("report", "--only", "1,3", "--out", out) == 0
    text = capsys.readouterr().out
    assert "[PASS] 1" in text and "[PASS] 3" in text
    assert [r["key"] for r in json.loads(out.read_text())["results"]] == ["1", "3"]
    assert run("report", "--only", "99") == 2
