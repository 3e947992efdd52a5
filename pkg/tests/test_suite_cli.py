import csv
import json
import math
import os

import pytest

from qcube import cli, report, suite
from qcube.generators import GeneratorSpec, generate
from qcube.laws import Grid, check
from qcube.records import scalar_record
from qcube.suite import SuiteConfig, run_suite, search_extremal

TINY = Grid(p=(1.0, 2.0), q=(1.0,), alpha=(0.5,), t=(0.5,), k=(1,))


def tiny_config(**kw):
    base = dict(laws=("Q1", "Q4", "Q9", "A4"), n_values=(1, 2), trials=3, seed=7, grid=TINY)
    base.update(kw)
    return SuiteConfig(**base)


def test_config_round_trip(tmp_path):
    cfg = tiny_config(generators=("bell", "low_degree"), workers=2, tol_scalar=1e-8)
    path = tmp_path / "cfg.json"
    path.write_text(report.dumps(cfg.to_dict()))
    assert SuiteConfig.from_dict(json.loads(path.read_text())) == cfg


def test_config_validation():
    with pytest.raises(suite.ConfigError):
        tiny_config(laws=("Q0",)).validate()
    with pytest.raises(suite.ConfigError):
        tiny_config(n_values=(0,)).validate()
    with pytest.raises(suite.ConfigError):
        SuiteConfig.from_dict({"grid": {"p": [5]}})


def test_empty_selection():
    rep = run_suite(tiny_config(laws=()))
    assert rep.all_passed and rep.to_dict()["laws"] == {}


def test_report_is_deterministic(tmp_path):
    cfg = tiny_config()
    a = report.write_report(run_suite(cfg), tmp_path / "a", wall_time=1.0)
    b = report.write_report(run_suite(cfg), tmp_path / "b", wall_time=2.0)
    assert a.read_bytes() == b.read_bytes()
    for law in cfg.laws:
        name = law + ".csv"
        assert (tmp_path / "a/laws" / name).read_bytes() == (tmp_path / "b/laws" / name).read_bytes()


def test_parallel_matches_serial():
    serial = run_suite(tiny_config()).to_dict()
    parallel = run_suite(tiny_config(workers=2)).to_dict()
    assert serial == parallel


def test_witness_replays():
    rep = run_suite(tiny_config(laws=("Q1", "Q9")))
    for law, summary in rep.to_dict()["laws"].items():
        witness = summary["witness"]
        spec = GeneratorSpec.from_dict(witness["generator"])
        rec = witness["record"]
        params = {k: v for k, v in rec["params"].items() if k in ("p", "q", "alpha", "t")}
        replay = check(law, generate(spec), params)
        match = [r for r in replay if r.params == rec["params"]]
        assert match and abs(match[0].margin - rec["margin"]) <= 1e-12


def test_failures_carry_witness(monkeypatch):
    monkeypatch.setattr(suite, "check", lambda law, A, params: [scalar_record(law, 0.0, 1.0)])
    rep = run_suite(tiny_config(laws=("Q2",), trials=2))
    d = rep.to_dict()
    assert not rep.all_passed and d["summary"]["failures"] == 4
    assert d["laws"]["Q2"]["failures"][0]["generator"]["kind"]


def test_atomic_write_leaves_no_partial(tmp_path, monkeypatch):
    target = tmp_path / "report.json"
    target.write_text("old")

    def boom(src, dst):
        raise OSError(28, "No space left on device")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(report.ReportIOError, match=str(target)):
        report.atomic_write_text(target, "new contents")
    assert target.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["report.json"]


def test_csv_columns(tmp_path):
    rep = run_suite(tiny_config(laws=("Q1",)))
    report.write_report(rep, tmp_path)
    with open(tmp_path / "laws/Q1.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "law_id" and rows[0][-5:] == ["lhs", "rhs", "margin", "pass", "status"]
    assert "t" in rows[0]
    assert len(rows) == 1 + 2 * 3 * len(TINY.t)


# -- command line -------------------------------------------------------------


def run_cli(tmp_path, *argv):
    return cli.main([*argv, "--out", str(tmp_path)])


def test_cli_bell_single_site(tmp_path):
    assert run_cli(tmp_path, "verify", "--laws", "Q4", "--n", "2", "--trials", "1", "--gen", "bell", "--quiet") == 0
    doc = json.loads((tmp_path / "report.json").read_text())
    q4 = doc["laws"]["Q4"]
    assert q4["trials"] == 1 and q4["failed"] == 0
    assert abs(q4["worst_margin"]) <= 1e-10
    assert doc["schema_version"] == suite.SCHEMA_VERSION


def test_cli_empty_laws(tmp_path):
    assert run_cli(tmp_path, "verify", "--laws", "", "--quiet") == 0
    assert json.loads((tmp_path / "report.json").read_text())["summary"]["records"] == 0


def test_cli_config_errors(tmp_path, capsys):
    assert run_cli(tmp_path, "verify", "--laws", "Q77") == 2
    assert run_cli(tmp_path, "verify", "--grid-p", "0.5") == 2
    assert run_cli(tmp_path, "verify", "--n", "x") == 2
    assert run_cli(tmp_path, "demo", "nope") == 2
    assert run_cli(tmp_path, "tabulate", "--names", "C9") == 2
    assert not (tmp_path / "report.json").exists()
    assert "configuration error" in capsys.readouterr().err


def test_cli_failure_exit(tmp_path, monkeypatch):
    monkeypatch.setattr(suite, "check", lambda law, A, params: [scalar_record(law, 0.0, 1.0)])
    assert run_cli(tmp_path, "verify", "--laws", "Q1", "--n", "1", "--trials", "1", "--quiet") == 1


def test_cli_config_file_with_flag_override(tmp_path):
    cfg = tiny_config(laws=("Q1",), trials=1)
    path = tmp_path / "cfg.json"
    path.write_text(report.dumps(cfg.to_dict()))
    out = tmp_path / "out"
    assert cli.main(["verify", "--config", str(path), "--seed", "99", "--quiet", "--out", str(out)]) == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["config"]["seed"] == 99 and doc["config"]["laws"] == ["Q1"]


def test_cli_env_out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    assert cli.main(["verify", "--laws", "Q1", "--n", "1", "--trials", "1", "--quiet"]) == 0
    assert (tmp_path / "env/report.json").exists()
    assert json.loads((tmp_path / "env/run_meta.json").read_text())["wall_time_s"] >= 0


def test_tabulate(tmp_path, capsys):
    argv = ["tabulate", "--names", "C1_main,C_alpha_t,cor16_Ck", "--grid-p", "1,1.5,2", "--grid-k", "1", "--grid-q", "1"]
    assert run_cli(tmp_path, *argv) == 0
    with open(tmp_path / "constants/C1_main.csv") as fh:
        rows = {r["p"]: float(r["value"]) for r in csv.DictReader(fh)}
    assert rows["1"] == pytest.approx(3 / (2 * math.pi), abs=1e-11) and rows["2"] == 1
    with open(tmp_path / "constants/C_alpha_t.csv") as fh:
        assert all(r["value"] == "1" for r in csv.DictReader(fh) if r["t"] == "0")
    with open(tmp_path / "constants/cor16_Ck.csv") as fh:
        first = next(csv.DictReader(fh))
    assert float(first["value"]) == pytest.approx(1 / (4 + 1 / (2 * math.e)), rel=1e-11)


def test_tabulate_blank_outside_domain():
    table = cli.tabulate(["isoper_K"], {"p": (1.0, 2.0)})
    header, rows = table["isoper_K"]
    assert rows[0][1] and rows[1][1] == ""


@pytest.mark.parametrize("name,needle", [("bell-sharpness", "0.562500000000"),
                                         ("poincare-extremizer", "margin=0.000e+00"),
                                         ("appendix-maj3", "fourier=0.333333333333333")])
def test_demos(tmp_path, capsys, name, needle):
    assert run_cli(tmp_path, "demo", name) == 0
    assert needle in capsys.readouterr().out
    doc = json.loads((tmp_path / f"demo-{name}.json").read_text())
    assert doc["records"]


# -- extremizer search ----------------------------------------------------------


def test_search_q4_finds_bell():
    found = search_extremal("Q4", n=2, restarts=1, iters=5)
    assert found[0].descriptor["start"] == "bell"
    assert abs(found[0].margin) <= 1e-10
    coeffs = found[0].descriptor["coeffs"]
    assert len(coeffs) == 16


def test_search_q1_level_one():
    found = search_extremal("Q1", n=1, params={"t": 0.5}, restarts=1, iters=5)
    assert all(abs(c.margin) <= 1e-12 for c in found if c.descriptor["start"].startswith("pauli"))
    assert any(c.descriptor["start"].startswith("pauli") for c in found)


def test_search_constant_family_is_degenerate():
    found = search_extremal("Q9", n=2, family="constant")
    assert found and all(c.status == "degenerate" and math.isnan(c.margin) for c in found)


def test_search_cli(tmp_path, capsys):
    assert run_cli(tmp_path, "search", "--law", "Q4", "--n", "2", "--iters", "3", "--restarts", "1") == 0
    doc = json.loads((tmp_path / "search-Q4-n2.json").read_text())
    assert doc["results"][0]["descriptor"]["start"] == "bell"
    assert run_cli(tmp_path, "search", "--law", "A1") == 2
