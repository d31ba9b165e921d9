import dataclasses
import json
import math

import numpy as np
import pytest

from hpdcover import hpd_set
from hpdcover.cli import RunConfig, cmd_figure, main, parse_dist_spec, parse_grid_spec

from conftest import config


def test_parse_dist_spec():
    assert parse_dist_spec("laplace").name == "laplace"
    assert parse_dist_spec("t3").name == "student_t3"
    d = parse_dist_spec("subexp:0.7")
    assert d.eta == 0.7
    with pytest.raises(ValueError):
        parse_dist_spec("weibull")


def test_parse_grid_spec():
    g = parse_grid_spec("0:2:5")
    assert np.allclose(g, [0.0, 0.5, 1.0, 1.5, 2.0])
    with pytest.raises(ValueError):
        parse_grid_spec("0:2")
    with pytest.raises(ValueError):
        parse_grid_spec("3:1:5")


def test_runconfig_roundtrip():
    rc = RunConfig(
        dist="subexp:0.7",
        lam=(0.5, 5.0),
        w=(0.125, 1.0),
        alpha=0.01,
        grid="1:2:7",
        x=1.25,
        method="mc",
        n=12345,
        seed=9,
        tol_tail=1e-8,
        mirror=False,
        out="a.csv",
    )
    text = rc.to_text()
    back = RunConfig.from_text(text)
    # NaN placeholders defeat == on the dataclass; the textual form is the
    # canonical representation and must be a fixed point.
    assert back.to_text() == text
    assert back.lam == rc.lam and back.w == rc.w
    assert back.tol_tail == rc.tol_tail and back.mirror is False
    assert math.isnan(back.theta0) and back.x == 1.25


def test_runconfig_rejects_unknown_keys():
    with pytest.raises(ValueError):
        RunConfig.from_text("nope=1\n")


def test_cli_hpd_json(tmp_path):
    out = tmp_path / "set.json"
    code = main([
        "hpd", "--dist", "laplace", "--lambda", "5", "--w", "1",
        "--alpha", "0.05", "--x", "6.2", "--out", str(out),
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    cs = hpd_set(config("laplace", 5.0, 1.0), 6.2)
    assert payload["regime"] == "II"
    assert payload["L"] == cs.lower and payload["U"] == cs.upper
    assert payload["length"] == pytest.approx(cs.length)
    assert payload["atom"] == 0.0


def test_cli_hpd_atom_case(tmp_path):
    out = tmp_path / "atom.json"
    code = main([
        "hpd", "--dist", "laplace", "--lambda", "5", "--w", "0.125",
        "--alpha", "0.05", "--x", "1.0", "--out", str(out),
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["regime"] == "ATOM"
    assert payload["intervals"] == []
    assert payload["L"] is None
    assert payload["atom"] > 0.95


def test_cli_coverage_csv_deterministic(tmp_path):
    args = [
        "coverage", "--dist", "gaussian", "--lambda", "0.5", "--w", "1",
        "--alpha", "0.05", "--grid", "1:3:5", "--method", "exact",
        "--n-base", "1024", "--n-dense", "128",
    ]
    out1 = tmp_path / "c1.csv"
    out2 = tmp_path / "c2.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    assert lines[0].split(",")[:4] == ["theta0", "C", "C_minus", "C_plus"]
    assert len(lines) == 6


def test_cli_coverage_mc_seeded(tmp_path):
    out = tmp_path / "mc.csv"
    code = main([
        "coverage", "--dist", "laplace", "--lambda", "0.5", "--w", "1",
        "--alpha", "0.05", "--grid", "1:2:2", "--method", "mc",
        "--n", "20000", "--seed", "3", "--out", str(out),
    ])
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[1].endswith("monte_carlo(seed=3, n=20000),20000,3")


def test_cli_config_file_with_flag_override(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("dist=laplace\nlam=5.0\nw=1.0\nalpha=0.05\nx=6.2\n")
    out = tmp_path / "o.json"
    code = main(["hpd", "--config", str(cfg_file), "--x", "7.0", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["x"] == 7.0  # flag beats config file


def test_cli_bounds(tmp_path):
    out = tmp_path / "b.json"
    code = main([
        "bounds", "--dist", "laplace", "--lambda", "5", "--w", "1",
        "--alpha", "0.05", "--grid", "5.5:9:4", "--n-base", "1024",
        "--n-dense", "128", "--out", str(out),
    ])
    payload = json.loads(out.read_text())
    names = {c["name"] for c in payload["checks"]}
    assert "c_minus_ceiling" in names and "dip_level" in names
    assert code == 0 and payload["passed"]


def test_cli_postselect(tmp_path):
    out = tmp_path / "ps.json"
    code = main([
        "postselect", "--dist", "laplace", "--lambda", "0.5", "--w", "1",
        "--alpha", "0.05", "--x", "3.0", "--out", str(out),
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["lambda"] == 0.5
    assert len(payload["intervals"]) >= 1


def test_cli_postselect_coverage(tmp_path):
    out = tmp_path / "pc.json"
    code = main([
        "postselect-coverage", "--dist", "laplace", "--lambda", "0.5", "--w", "1",
        "--alpha", "0.05", "--theta0", "2.0", "--n", "20000", "--seed", "1",
        "--out", str(out),
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["coverage"] >= 0.95 - 3.0 * payload["stderr"]
    assert 0 < payload["acceptance_rate"] <= 1


def test_cli_error_exit_code(tmp_path):
    assert main(["coverage", "--dist", "nope", "--grid", "0:1:2"]) == 2
    assert main(["hpd", "--dist", "laplace"]) == 2  # missing --x


def test_figure_emitters_smoke(tmp_path):
    rc = RunConfig(dist="laplace", lam=(5.0,), w=(1.0,), alpha=0.05,
                   fig_grid_n=40, mirror=False, outdir=str(tmp_path),
                   n_base=1024, n_dense=128)
    for fig in (2, 3, 4, 5):
        paths = cmd_figure(fig, rc)
        assert all(p.exists() for p in paths)
        side = json.loads(paths[1].read_text())
        assert side["figure"] == fig
        assert "config" in side and side["config"]["alpha"] == 0.05
    csv3 = (tmp_path / "figure3.csv").read_text().splitlines()
    assert csv3[0] == "x,r1,r2,r3,regime"
    # the pinned-edge radius is +inf near the origin for this panel
    assert csv3[1].split(",")[2] == "inf"
    csv5 = (tmp_path / "figure5.csv").read_text().splitlines()
    nominal = csv5[1].split(",")[-1]
    assert float(nominal) == pytest.approx(2.0 * math.log(20.0), rel=1e-10)


def test_figure_one_small_and_deterministic(tmp_path):
    rc1 = RunConfig(dist="laplace", lam=(0.5,), w=(0.25, 1.0), alpha=0.05,
                    fig_grid_n=16, mirror=True, outdir=str(tmp_path / "a"),
                    n_base=1024, n_dense=128)
    rc2 = RunConfig(dist="laplace", lam=(0.5,), w=(0.25, 1.0), alpha=0.05,
                    fig_grid_n=16, mirror=True, outdir=str(tmp_path / "b"),
                    n_base=1024, n_dense=128)
    p1 = cmd_figure(1, rc1)
    p2 = cmd_figure(1, rc2)
    assert p1[0].read_bytes() == p2[0].read_bytes()
    header = p1[0].read_text().splitlines()[0].split(",")
    assert header[:4] == ["dist", "lambda", "w", "theta0"]
    side = json.loads(p1[1].read_text())
    assert side["notes"]["w_sweep"] == [0.25, 1.0]
    assert not side["notes"]["w_sweep_is_default_assumption"]


def test_cli_coverage_partial_failure(tmp_path, capsys):
    out = tmp_path / "partial.csv"
    code = main([
        "coverage", "--dist", "laplace", "--lambda", "0.5,-1", "--w", "1",
        "--alpha", "0.05", "--grid", "1:2:2", "--n-base", "1024",
        "--n-dense", "128", "--out", str(out),
    ])
    assert code == 1
    err = capsys.readouterr().err
    assert "lambda=-1" in err
    lines = out.read_text().splitlines()
    assert len(lines) == 3  # header + the two points of the healthy config
    assert lines[1].startswith("0.5,1,")


def test_thread_count_env_cap(monkeypatch):
    from hpdcover.coverage import thread_count

    monkeypatch.setenv("HPD_THREADS", "1")
    assert thread_count() == 1
    assert thread_count(8) == 1
    monkeypatch.delenv("HPD_THREADS")
    assert thread_count(1) == 1


def test_figure_csv_reproducible_from_sidecar(tmp_path):
    rc = RunConfig(dist="laplace", alpha=0.02, outdir=str(tmp_path / "first"))
    first_csv, first_json = cmd_figure(3, rc)
    sidecar = json.loads(first_json.read_text())
    rebuilt = RunConfig.from_dict(sidecar["config"])
    rebuilt = dataclasses.replace(rebuilt, outdir=str(tmp_path / "second"))
    second_csv, _ = cmd_figure(sidecar["figure"], rebuilt)
    assert first_csv.read_bytes() == second_csv.read_bytes()
