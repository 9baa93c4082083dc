"""Experiment configuration: declarative INI manifests plus CLI overrides."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from typing import Optional

from .errors import ParseError

KNOWN_METHODS = ("LP-CN", "LP-AA", "HP-CN", "HP-AA", "HP-Null", "HP-MatComp",
                 "HP-CHESHIRE", "ERGM")
DEFAULT_METHODS = KNOWN_METHODS


@dataclass
class ExperimentConfig:
    datasets: list[str]
    methods: list[str] = field(default_factory=lambda: list(DEFAULT_METHODS))
    mechanism: str = "MCAR"
    rhos: list[float] = field(default_factory=lambda: [0.2])
    trials: int = 20
    seed: int = 7
    out_dir: str = "results"
    chart: bool = False
    exclude: set = field(default_factory=set)   # {(dataset, method)}
    options: dict = field(default_factory=dict)  # ratio / matcomp_rank / ergm / cheshire / mnar_alpha

    def validate(self) -> "ExperimentConfig":
        if not self.datasets:
            raise ValueError("config needs at least one dataset")
        if not self.methods:
            raise ValueError("config needs at least one method")
        for m in self.methods:
            if m not in KNOWN_METHODS:
                raise ValueError(f"unknown method {m!r}; known: {KNOWN_METHODS}")
        if self.mechanism not in ("MCAR", "MNAR"):
            raise ValueError("mechanism must be MCAR or MNAR")
        for r in self.rhos:
            if not 0.0 < r < 1.0:
                raise ValueError(f"rho {r} outside (0,1)")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        return self


def _split_list(raw: str) -> list[str]:
    return [tok for tok in raw.replace(",", " ").split() if tok]


def load_config(path: str) -> ExperimentConfig:
    """Parse an INI manifest. The [experiment] section holds the grid; the
    optional [negatives]/[matcomp]/[ergm]/[cheshire]/[mnar] sections hold
    per-method options. `exclude` lists dataset:method pairs to skip."""
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise ParseError(f"config file {path!r} is unreadable")
    if not cp.has_section("experiment"):
        raise ParseError("config needs an [experiment] section")
    exp = cp["experiment"]
    cfg = ExperimentConfig(datasets=_split_list(exp.get("datasets", "")))
    if "methods" in exp:
        cfg.methods = _split_list(exp["methods"])
    cfg.mechanism = exp.get("mechanism", cfg.mechanism).upper()
    if "rho" in exp:
        cfg.rhos = [float(r) for r in _split_list(exp["rho"])]
    cfg.trials = exp.getint("trials", cfg.trials)
    cfg.seed = exp.getint("seed", cfg.seed)
    cfg.out_dir = exp.get("out", cfg.out_dir)
    cfg.chart = exp.getboolean("chart", cfg.chart)
    for pair in _split_list(exp.get("exclude", "")):
        if ":" not in pair:
            raise ParseError(f"exclude entries are dataset:method, got {pair!r}")
        ds, method = pair.split(":", 1)
        cfg.exclude.add((ds, method))

    opts: dict = {}
    if cp.has_section("negatives"):
        opts["ratio"] = cp.getint("negatives", "ratio", fallback=1)
    if cp.has_section("matcomp") and cp.has_option("matcomp", "rank"):
        opts["matcomp_rank"] = cp.getint("matcomp", "rank")
    if cp.has_section("mnar") and cp.has_option("mnar", "alpha"):
        opts["mnar_alpha"] = cp.getfloat("mnar", "alpha")
    if cp.has_section("ergm"):
        opts["ergm"] = {k: float(v) for k, v in cp.items("ergm")}
    if cp.has_section("cheshire"):
        ch = {}
        for k, v in cp.items("cheshire"):
            ch[k] = float(v) if k == "learn_rate" else int(v)
        opts["cheshire"] = ch
    cfg.options = opts
    return cfg.validate()
