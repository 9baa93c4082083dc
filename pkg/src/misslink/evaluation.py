"""Metrics and trial orchestration.

roc_auc uses the Mann-Whitney rank formulation with tie-averaged ranks kept
as exact integers (doubled), so a constant scorer yields exactly 0.5 and the
result matches rational-arithmetic oracles bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import cheshire
from .errors import (CandidateError, DegenerateSplitError, FitError,
                     SamplingError)
from .ergm import ErgmScorer, ErgmSpec
from .graph import Graph
from .hypergraph import Hypergraph, derive_hypergraph
from .masking import (hp_candidates, lp_candidates, mask, observed_graph,
                      observed_hypergraph)
from .scorers import (AdamicAdar, CommonNeighbors, MatrixCompletion, NullTie,
                      lift)


def roc_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if s.shape != y.shape or s.ndim != 1:
        raise ValueError("scores and labels must be equal-length vectors")
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    if n_pos + n_neg != len(y):
        raise ValueError("labels must be 0/1")
    if n_pos == 0 or n_neg == 0:
        raise ValueError("need at least one positive and one negative")
    order = np.argsort(s, kind="mergesort")
    ss, yy = s[order], y[order]
    # doubled average rank of a tie group at 1-based positions a..b is a+b
    doubled_rank_sum = 0  # over positives, exact int
    i, n = 0, len(ss)
    while i < n:
        j = i
        while j + 1 < n and ss[j + 1] == ss[i]:
            j += 1
        pos_in_group = int((yy[i:j + 1] == 1).sum())
        doubled_rank_sum += pos_in_group * (i + j + 2)
        i = j + 1
    numer = doubled_rank_sum - n_pos * (n_pos + 1)
    return numer / (2 * n_pos * n_neg)


def f1_mcc(scores: Sequence[float], labels: Sequence[int],
           threshold: float = 0.5) -> tuple[float, float]:
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    pred = s >= threshold
    tp = int(np.sum(pred & (y == 1)))
    fp = int(np.sum(pred & (y == 0)))
    fn = int(np.sum(~pred & (y == 1)))
    tn = int(np.sum(~pred & (y == 0)))
    f1 = 2.0 * tp / (2 * tp + fp + fn) if (2 * tp + fp + fn) > 0 else 0.0
    marginals = (tp + fp, tp + fn, tn + fp, tn + fn)
    if any(m == 0 for m in marginals):
        mcc = 0.0
    else:
        mcc = (tp * tn - fp * fn) / math.sqrt(float(marginals[0]) * marginals[1]
                                              * marginals[2] * marginals[3])
    return f1, mcc


def minmax_normalize(scores: np.ndarray) -> np.ndarray:
    """Rescale to [0,1] for thresholding; a constant vector maps to all 0.5."""
    s = np.asarray(scores, dtype=np.float64)
    lo, hi = s.min(), s.max()
    if hi == lo:
        return np.full_like(s, 0.5)
    return (s - lo) / (hi - lo)


@dataclass(frozen=True)
class Method:
    name: str
    task: str               # LP or HP
    probability_like: bool  # True: threshold raw scores at 0.5


METHODS: dict[str, Method] = {m.name: m for m in [
    Method("LP-CN", "LP", False),
    Method("LP-AA", "LP", False),
    Method("HP-CN", "HP", False),
    Method("HP-AA", "HP", False),
    Method("HP-Null", "HP", True),
    Method("HP-MatComp", "HP", False),
    Method("HP-CHESHIRE", "HP", True),
    Method("ERGM", "HP", True),
]}


@dataclass(frozen=True)
class TrialResult:
    dataset: str
    method: str
    task: str
    mechanism: str
    rho: float
    seed: int
    auc: Optional[float]
    f1: Optional[float]
    mcc: Optional[float]
    status: str  # ok | degenerate-split | no-dyad-positives | sampling-exhausted | fit-failed

    @property
    def ok(self) -> bool:
        return self.status == "ok"


_STATUS_BY_ERROR = [
    (DegenerateSplitError, "degenerate-split"),
    (CandidateError, "no-dyad-positives"),
    (SamplingError, "sampling-exhausted"),
    (FitError, "fit-failed"),
]


def _dyad_scorer(method: str, g_obs: Graph, options: dict):
    if method.endswith("CN"):
        return CommonNeighbors(g_obs)
    if method.endswith("AA"):
        return AdamicAdar(g_obs)
    if method == "HP-Null":
        return NullTie(g_obs)
    if method == "HP-MatComp":
        return MatrixCompletion(g_obs, options.get("matcomp_rank"))
    if method == "ERGM":
        eo = options.get("ergm", {})
        spec = ErgmSpec(tau_d=eo.get("tau_d", 0.5), tau_e=eo.get("tau_e", 0.5))
        return ErgmScorer(g_obs, spec, ridge=eo.get("ridge", 1e-6))
    raise KeyError(f"unknown method {method!r}")


def run_trial(g: Graph, dataset: str, method: str, mechanism: str, rho: float,
              seed: int, options: Optional[dict] = None,
              h: Optional[Hypergraph] = None) -> TrialResult:
    """One masked evaluation trial; failure becomes a status, not an exception.

    All stage randomness (mask, negative sampling, model init) is derived
    from the single trial seed via a seed sequence.
    """
    if method not in METHODS:
        raise KeyError(f"unknown method {method!r}; known: {sorted(METHODS)}")
    options = options or {}
    task = METHODS[method].task
    if h is None:
        h = derive_hypergraph(g)
    mask_seed, cand_seed, model_seed = (
        int(x) for x in np.random.SeedSequence(seed).generate_state(3))
    ratio = int(options.get("ratio", 1))

    base = TrialResult(dataset=dataset, method=method, task=task,
                       mechanism=mechanism, rho=rho, seed=seed,
                       auc=None, f1=None, mcc=None, status="ok")
    try:
        split = mask(h, rho, mechanism, mask_seed,
                     mnar_alpha=float(options.get("mnar_alpha", 1.0)))
        g_obs = observed_graph(h, split, g.labels)
        if task == "LP":
            cands = lp_candidates(g, h, split, ratio, cand_seed)
        else:
            cands = hp_candidates(h, split, ratio, cand_seed)
        sets = cands.node_sets()
        if method == "HP-CHESHIRE":
            co = dict(options.get("cheshire", {}))
            co["seed"] = model_seed
            model = cheshire.train(observed_hypergraph(h, split),
                                   cheshire.CheshireParams(**co))
            scores = np.array([cheshire.score(model, s) for s in sets])
        else:
            scorer = _dyad_scorer(method, g_obs, options)
            if task == "LP":
                scores = np.array([scorer.score(s[0], s[1]) for s in sets])
            else:
                scores = np.array([lift(scorer, s) for s in sets])
    except tuple(e for e, _ in _STATUS_BY_ERROR) as exc:
        slug = next(s for e, s in _STATUS_BY_ERROR if isinstance(exc, e))
        return replace(base, status=slug)

    labels = cands.labels()
    auc = roc_auc(scores, labels)
    thr = scores if METHODS[method].probability_like else minmax_normalize(scores)
    f1, mcc = f1_mcc(thr, labels)
    return replace(base, auc=auc, f1=f1, mcc=mcc)


@dataclass(frozen=True)
class AggregateRow:
    dataset: str
    method: str
    task: str
    mechanism: str
    rho: float
    n_trials: int  # successful trials only
    auc_mean: Optional[float]
    auc_sd: Optional[float]
    f1_mean: Optional[float]
    f1_sd: Optional[float]
    mcc_mean: Optional[float]
    mcc_sd: Optional[float]


def aggregate(trials: Sequence[TrialResult]) -> list[AggregateRow]:
    """Group by (dataset, method, task, mechanism, rho) in first-appearance
    order; means/sds (population) over successful trials only."""
    if not trials:
        raise ValueError("no trials to aggregate")
    groups: dict[tuple, list[TrialResult]] = {}
    for t in trials:
        groups.setdefault((t.dataset, t.method, t.task, t.mechanism, t.rho),
                          []).append(t)
    rows = []
    for key, ts in groups.items():
        good = [t for t in ts if t.ok]

        def ms(vals):
            if not vals:
                return None, None
            arr = np.array(vals, dtype=np.float64)
            return float(arr.mean()), float(arr.std(ddof=0))

        auc_m, auc_s = ms([t.auc for t in good])
        f1_m, f1_s = ms([t.f1 for t in good])
        mcc_m, mcc_s = ms([t.mcc for t in good])
        rows.append(AggregateRow(*key, n_trials=len(good),
                                 auc_mean=auc_m, auc_sd=auc_s,
                                 f1_mean=f1_m, f1_sd=f1_s,
                                 mcc_mean=mcc_m, mcc_sd=mcc_s))
    return rows
