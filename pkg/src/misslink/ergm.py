"""ERGM terms (edges, gwdegree, gwesp), change statistics, and maximum
pseudolikelihood fitting.

MPLE reduces to logistic regression of dyad indicators on change statistics;
a tiny ridge penalty keeps the Newton solve stable under separation, which is
common on very small graphs. The normalizing constant of the model is never
computed — every quantity used here conditions on the rest of the graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import FitError
from .graph import Graph

KNOWN_TERMS = ("edges", "gwdegree", "gwesp")


def _sigmoid(eta):
    # overflow-safe in both tails
    eta = np.asarray(eta, dtype=np.float64)
    out = np.empty_like(eta)
    pos = eta >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-eta[pos]))
    e = np.exp(eta[~pos])
    out[~pos] = e / (1.0 + e)
    return out


@dataclass(frozen=True)
class ErgmSpec:
    """Ordered term list; gwdegree/gwesp carry fixed decay parameters."""

    terms: tuple[str, ...] = ("edges", "gwdegree", "gwesp")
    tau_d: float = 0.5
    tau_e: float = 0.5

    def __post_init__(self):
        for t in self.terms:
            if t not in KNOWN_TERMS:
                raise ValueError(f"unknown ERGM term {t!r}")
        if "edges" not in self.terms:
            raise ValueError("the edges term is required")
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("duplicate terms")
        if self.tau_d <= 0 or self.tau_e <= 0:
            raise ValueError("decay parameters must be positive")

    def decay_of(self, term: str) -> Optional[float]:
        if term == "gwdegree":
            return self.tau_d
        if term == "gwesp":
            return self.tau_e
        return None


@dataclass
class ErgmFit:
    theta: np.ndarray
    spec: ErgmSpec
    iterations: int
    converged: bool
    grad_norm: float


def gw_weight(k: int, tau: float) -> float:
    """Geometric weight e^tau * (1 - (1 - e^-tau)^k); zero at k = 0."""
    return math.exp(tau) * (1.0 - (1.0 - math.exp(-tau)) ** k)


def statistics(g: Graph, spec: ErgmSpec) -> np.ndarray:
    out = []
    for term in spec.terms:
        if term == "edges":
            out.append(float(g.m))
        elif term == "gwdegree":
            out.append(sum(gw_weight(g.degree(v), spec.tau_d) for v in range(g.n)))
        else:  # gwesp: per-edge shared-partner counts
            total = 0.0
            for u, v in g.edges:
                total += gw_weight(len(g.adj[u] & g.adj[v]), spec.tau_e)
            out.append(total)
    return np.array(out, dtype=np.float64)


def change_stats(g: Graph, i: int, j: int, spec: ErgmSpec) -> np.ndarray:
    """s(G with edge ij) - s(G without edge ij), all other dyads held fixed.

    Computed locally from the neighborhoods of i and j; independent of
    whether (i,j) is currently present.
    """
    if i == j:
        raise ValueError("dyad endpoints must differ")
    ni = g.adj[i] - {j}
    nj = g.adj[j] - {i}
    out = []
    for term in spec.terms:
        if term == "edges":
            out.append(1.0)
        elif term == "gwdegree":
            w = spec.tau_d
            di, dj = len(ni), len(nj)
            out.append(gw_weight(di + 1, w) - gw_weight(di, w)
                       + gw_weight(dj + 1, w) - gw_weight(dj, w))
        else:
            # the new edge has k0 shared partners; each common neighbor c
            # gives edges (i,c) and (j,c) one extra shared partner.
            w = spec.tau_e
            common = ni & nj
            delta = gw_weight(len(common), w)
            for c in common:
                s_ic = len(ni & g.adj[c])
                s_jc = len(nj & g.adj[c])
                delta += gw_weight(s_ic + 1, w) - gw_weight(s_ic, w)
                delta += gw_weight(s_jc + 1, w) - gw_weight(s_jc, w)
            out.append(delta)
    return np.array(out, dtype=np.float64)


def _dyad_design(g: Graph, spec: ErgmSpec) -> tuple[np.ndarray, np.ndarray]:
    rows, y = [], []
    for i in range(g.n):
        for j in range(i + 1, g.n):
            rows.append(change_stats(g, i, j, spec))
            y.append(1.0 if g.has_edge(i, j) else 0.0)
    return np.array(rows), np.array(y)


def fit_mple(g_obs: Graph, spec: ErgmSpec = None, ridge: float = 1e-6,
             tol: float = 1e-8, max_iter: int = 100) -> ErgmFit:
    """Ridge-penalized logistic regression of dyad states on change stats,
    solved by damped Newton iterations."""
    if spec is None:
        spec = ErgmSpec()
    n_dyads = g_obs.n * (g_obs.n - 1) // 2
    if g_obs.m == 0 or g_obs.m == n_dyads:
        raise FitError("all dyads share one label; pseudolikelihood is degenerate")
    x, y = _dyad_design(g_obs, spec)
    if not np.all(np.isfinite(x)):
        raise FitError("non-finite change statistics")

    def penalized_ll(theta):
        eta = x @ theta
        return float(y @ eta - np.logaddexp(0.0, eta).sum() - ridge * theta @ theta)

    theta = np.zeros(len(spec.terms))
    ll = penalized_ll(theta)
    grad_norm = math.inf
    it = 0
    converged = False
    for it in range(1, max_iter + 1):
        eta = x @ theta
        p = _sigmoid(eta)
        grad = x.T @ (y - p) - 2.0 * ridge * theta
        grad_norm = float(np.abs(grad).max())
        if grad_norm < tol:
            converged = True
            break
        w = p * (1.0 - p)
        hess = x.T @ (x * w[:, None]) + 2.0 * ridge * np.eye(len(theta))
        step = np.linalg.solve(hess, grad)
        scale = 1.0
        while scale > 1e-10:  # damping: never accept a worse penalized ll
            cand = theta + scale * step
            cand_ll = penalized_ll(cand)
            if cand_ll >= ll:
                theta, ll = cand, cand_ll
                break
            scale *= 0.5
    return ErgmFit(theta=theta, spec=spec, iterations=it,
                   converged=converged, grad_norm=grad_norm)


def score_ergm(fit: ErgmFit, g_obs: Graph, i: int, j: int) -> float:
    """Conditional probability of the dyad given the rest of the graph."""
    if fit.theta is None or not np.all(np.isfinite(fit.theta)):
        raise FitError("model is not fitted")
    eta = float(fit.theta @ change_stats(g_obs, i, j, fit.spec))
    if eta >= 0:
        return 1.0 / (1.0 + math.exp(-eta))
    e = math.exp(eta)
    return e / (1.0 + e)


class ErgmScorer:
    """Dyad scorer backed by an MPLE fit on the observed graph."""

    name = "ERGM"
    probability_like = True

    def __init__(self, g_obs: Graph, spec: ErgmSpec = None, ridge: float = 1e-6):
        self.g = g_obs
        self.fit = fit_mple(g_obs, spec, ridge=ridge)

    def score(self, i: int, j: int) -> float:
        return score_ergm(self.fit, self.g, i, j)


def fit_report(fit: ErgmFit) -> str:
    """CSV `term,theta,decay` followed by a commented diagnostics block."""
    lines = ["term,theta,decay"]
    for k, term in enumerate(fit.spec.terms):
        decay = fit.spec.decay_of(term)
        lines.append("%s,%.6f,%s" % (term, fit.theta[k],
                                     "" if decay is None else "%g" % decay))
    lines.append("# diagnostics")
    lines.append(f"# iterations: {fit.iterations}")
    lines.append(f"# converged: {fit.converged}")
    lines.append(f"# final_grad_norm: {fit.grad_norm:.3e}")
    return "\n".join(lines) + "\n"
