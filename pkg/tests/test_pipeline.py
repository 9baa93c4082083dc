"""Registry, config manifests, the grid runner, reports, and the CLI."""

import csv
import os

import numpy as np
import pytest

from misslink.cli import main
from misslink.config import ExperimentConfig, load_config
from misslink.errors import ParseError
from misslink.experiment import run_experiment
from misslink.graph import graph_stats
from misslink.registry import (
    BUNDLED,
    REGISTRY_ENV_VAR,
    RegistryEntry,
    available_datasets,
    registry_load,
)

SIX = ["bali2002", "bali2005", "christmas_eve", "australian_embassy",
       "hamburg_cell", "london_gang"]

EXPECTED_ROWS = {
    "bali2002": (15, 24, "0.228600", 22),
    "bali2005": (9, 15, "0.416700", 11),
    "christmas_eve": (14, 16, "0.175800", 5),
    "australian_embassy": (10, 15, "0.333300", 8),
    "hamburg_cell": (12, 23, "0.348500", 23),
    "london_gang": (50, 85, "0.069400", 46),
}


def test_bundled_datasets_present_with_exact_stats(caplog):
    assert set(SIX) <= set(available_datasets())
    with caplog.at_level("WARNING"):
        for key in SIX:
            g, volumes = registry_load(key)
            assert volumes is None
            assert graph_stats(g).table_row() == EXPECTED_ROWS[key]
    assert not caplog.records  # self-check stays silent when stats match


def test_registry_unknown_key_lists_alternatives():
    with pytest.raises(KeyError, match="bali2002"):
        registry_load("erdos_renyi_1959")


def test_registry_loads_plain_paths(tmp_path):
    p = tmp_path / "toy.edges"
    p.write_text("a b\nb c\na c\n")
    g, volumes = registry_load(str(p))
    assert g.n == 3 and g.m == 3 and volumes is None


def test_registry_sniffs_message_logs(tmp_path):
    p = tmp_path / "log.csv"
    p.write_text("sender,recipient,weight\nana,bo,2\nbo,cy,1\n")
    g, volumes = registry_load(str(p))
    assert g.m == 2
    assert volumes == {"ana": 2, "bo": 3, "cy": 1}


def test_registry_env_manifest(tmp_path, monkeypatch):
    edges = tmp_path / "mine.edges"
    edges.write_text("x y\ny z\n")
    ini = tmp_path / "registry.ini"
    ini.write_text(f"[registry]\nmytoy = {edges}\n")
    monkeypatch.setenv(REGISTRY_ENV_VAR, str(ini))
    assert "mytoy" in available_datasets()
    g, _ = registry_load("mytoy")
    assert g.m == 2


def test_registry_warns_on_stats_drift(monkeypatch, caplog):
    wrong = RegistryEntry("drifted", "bali2005.edges",
                          (9, 15, "0.416700", 99), "intentionally wrong")
    monkeypatch.setitem(BUNDLED, "drifted", wrong)
    with caplog.at_level("WARNING"):
        registry_load("drifted")
    assert any("do not match" in r.message for r in caplog.records)


CONFIG_INI = """\
[experiment]
datasets = bali2005, christmas_eve
methods = HP-Null HP-CN
mechanism = mnar
rho = 0.2 0.35
trials = 4
seed = 11
out = {out}
chart = true
exclude = christmas_eve:HP-CN

[negatives]
ratio = 2

[mnar]
alpha = 1.5

[ergm]
tau_d = 0.4
"""


def test_load_config_full_manifest(tmp_path):
    path = tmp_path / "exp.ini"
    path.write_text(CONFIG_INI.format(out=tmp_path / "res"))
    cfg = load_config(str(path))
    assert cfg.datasets == ["bali2005", "christmas_eve"]
    assert cfg.methods == ["HP-Null", "HP-CN"]
    assert cfg.mechanism == "MNAR"
    assert cfg.rhos == [0.2, 0.35]
    assert cfg.trials == 4 and cfg.seed == 11 and cfg.chart
    assert cfg.exclude == {("christmas_eve", "HP-CN")}
    assert cfg.options["ratio"] == 2
    assert cfg.options["mnar_alpha"] == 1.5
    assert cfg.options["ergm"]["tau_d"] == 0.4


def test_load_config_rejects_bad_manifests(tmp_path):
    missing = tmp_path / "nope.ini"
    with pytest.raises(ParseError):
        load_config(str(missing))
    bad = tmp_path / "bad.ini"
    bad.write_text("[experiment]\ndatasets = d\nexclude = no-colon\n")
    with pytest.raises(ParseError):
        load_config(str(bad))
    nosec = tmp_path / "nosec.ini"
    nosec.write_text("[other]\nx = 1\n")
    with pytest.raises(ParseError):
        load_config(str(nosec))


def test_config_validation_errors():
    with pytest.raises(ValueError):
        ExperimentConfig(datasets=[]).validate()
    with pytest.raises(ValueError):
        ExperimentConfig(datasets=["d"], methods=["HP-Magic"]).validate()
    with pytest.raises(ValueError):
        ExperimentConfig(datasets=["d"], mechanism="SOMETIMES").validate()
    with pytest.raises(ValueError):
        ExperimentConfig(datasets=["d"], rhos=[1.5]).validate()
    with pytest.raises(ValueError):
        ExperimentConfig(datasets=["d"], trials=0).validate()


def small_cfg(out_dir, chart=False):
    return ExperimentConfig(datasets=["bali2005"],
                            methods=["HP-Null", "LP-CN", "HP-CN"],
                            rhos=[0.2, 0.3], trials=3, seed=5,
                            out_dir=str(out_dir), chart=chart)


def test_run_experiment_grid_shape_and_files(tmp_path):
    cfg = small_cfg(tmp_path / "res", chart=True)
    trials, agg = run_experiment(cfg)
    assert len(trials) == 3 * 2 * 3             # methods x rhos x trials
    assert len(agg) == 3 * 2

    with open(tmp_path / "res" / "results.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(trials)
    assert list(rows[0]) == ["dataset", "method", "task", "mechanism", "rho",
                             "seed", "auc", "f1", "mcc", "status"]
    # grid order: methods outer, rho inner, trials innermost
    assert [r["method"] for r in rows[:7]] == ["HP-Null"] * 6 + ["LP-CN"]
    assert [r["seed"] for r in rows[:3]] == ["5", "6", "7"]
    assert (tmp_path / "res" / "chart.svg").exists()
    assert (tmp_path / "res" / "chart.svg").stat().st_size > 1000


def test_run_experiment_exclude_pairs(tmp_path):
    cfg = small_cfg(tmp_path / "res")
    cfg.exclude = {("bali2005", "LP-CN")}
    trials, agg = run_experiment(cfg, write=False)
    assert {t.method for t in trials} == {"HP-Null", "HP-CN"}


def test_rerun_is_byte_identical(tmp_path):
    cfg_a = small_cfg(tmp_path / "a", chart=True)
    cfg_b = small_cfg(tmp_path / "b", chart=True)
    run_experiment(cfg_a)
    run_experiment(cfg_b)
    for name in ("results.csv", "aggregate.csv", "chart.svg"):
        a = (tmp_path / "a" / name).read_bytes()
        b = (tmp_path / "b" / name).read_bytes()
        assert a == b, name


def test_aggregate_csv_matches_independent_recompute(tmp_path):
    cfg = small_cfg(tmp_path / "res")
    run_experiment(cfg)
    with open(tmp_path / "res" / "results.csv", newline="") as fh:
        raw = list(csv.DictReader(fh))
    with open(tmp_path / "res" / "aggregate.csv", newline="") as fh:
        agg = list(csv.DictReader(fh))
    for row in agg:
        group = [r for r in raw
                 if (r["dataset"], r["method"], r["rho"]) ==
                    (row["dataset"], row["method"], row["rho"])
                 and r["status"] == "ok"]
        assert int(row["n_trials"]) == len(group)
        if group:
            aucs = np.array([float(r["auc"]) for r in group])
            assert float(row["auc_mean"]) == pytest.approx(aucs.mean(),
                                                           abs=5e-7)
            assert float(row["auc_sd"]) == pytest.approx(aucs.std(ddof=0),
                                                         abs=5e-7)


def test_cli_stats_exact_row(capsys):
    assert main(["stats", "--dataset", "hamburg_cell"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["dataset,nodes,edges,density,triangles",
                   "hamburg_cell,12,23,0.348500,23"]


def test_cli_cliques_min_size(capsys):
    assert main(["cliques", "--dataset", "bali2005", "--min-size", "3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines
    assert all(len(line.split(",")) >= 3 for line in lines)


def test_cli_fit_ergm_report(capsys):
    assert main(["fit-ergm", "--dataset", "bali2005", "--tau-d", "0.4"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "term,theta,decay"
    assert out[2].startswith("gwdegree,") and out[2].endswith(",0.4")
    assert "# diagnostics" in out


def test_cli_run_with_flags(tmp_path, capsys):
    rc = main(["run", "--datasets", "bali2005", "--methods", "HP-Null",
               "LP-AA", "--rho", "0.25", "--trials", "2", "--seed", "3",
               "--mechanism", "mnar", "--out", str(tmp_path / "cli_out")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "HP-Null" in out and "LP-AA" in out
    assert (tmp_path / "cli_out" / "results.csv").exists()
    with open(tmp_path / "cli_out" / "results.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    assert {r["mechanism"] for r in rows} == {"MNAR"}


def test_cli_run_with_config_file(tmp_path, capsys):
    ini = tmp_path / "exp.ini"
    ini.write_text("[experiment]\ndatasets = bali2005\nmethods = HP-Null\n"
                   f"trials = 2\nout = {tmp_path / 'from_ini'}\n")
    assert main(["run", "--config", str(ini)]) == 0
    capsys.readouterr()
    assert (tmp_path / "from_ini" / "aggregate.csv").exists()


def test_cli_error_paths(tmp_path, capsys):
    assert main(["stats", "--dataset", "atlantis"]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["run", "--out", str(tmp_path)]) == 2
    assert "error:" in capsys.readouterr().err
