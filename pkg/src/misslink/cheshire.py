"""Chebyshev spectral hyperlink predictor.

Pipeline per candidate node-set S: incidence-encoded node embeddings ->
clique Chebyshev convolution -> (Frobenius-norm, max-min) pooling -> sigmoid
head. Because the convolved graph is always the complete graph on S, the
scaled normalized Laplacian has the closed form L_tilde = I - (2/|S|)J and
its spectrum is exactly {-1, 1}; no per-candidate eigensolve is needed.

Training minimizes binary cross-entropy over the observed hyperedges plus
per-epoch resampled corrupted negatives. Gradients are analytic (hand-derived
through pooling, the Chebyshev recursion, and the encoder) and updates use
Adam. Everything is float64 numpy and deterministic given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import FitError, SamplingError
from .hypergraph import Hypergraph, incidence

_CORRUPT_ATTEMPT_BUDGET = 10 ** 4
MIN_TRAIN_HYPEREDGES = 10


@dataclass(frozen=True)
class CheshireParams:
    embed_dim: int = 32
    conv_dim: int = 32
    cheby_order: int = 3
    epochs: int = 200
    batch_size: int = 32
    learn_rate: float = 1e-2
    train_neg_ratio: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("embed_dim", "conv_dim", "cheby_order", "epochs",
                     "batch_size", "train_neg_ratio"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.learn_rate <= 0:
            raise ValueError("learn_rate must be positive")


class CheshireModel:
    """Weights plus (after training/loading) frozen node embeddings X."""

    def __init__(self, params: CheshireParams, n: int, m_obs: int,
                 rng: Optional[np.random.Generator] = None):
        self.params = params
        self.n = n
        self.m_obs = m_obs
        d, dc, k = params.embed_dim, params.conv_dim, params.cheby_order
        if rng is None:
            rng = np.random.default_rng(params.seed)
        self.W_enc = rng.normal(0.0, np.sqrt(2.0 / (m_obs + d)), size=(d, m_obs))
        self.b_enc = np.zeros(d)
        self.W_conv = rng.normal(0.0, np.sqrt(2.0 / (d + dc)), size=(k, dc, d))
        self.w_head = rng.normal(0.0, np.sqrt(2.0 / (2 * dc + 1)), size=2 * dc)
        self.b_head = np.zeros(1)
        self.X: Optional[np.ndarray] = None  # frozen embeddings, set by train/load
        self.loss_history: list[float] = []

    def weights(self) -> dict[str, np.ndarray]:
        return {"W_enc": self.W_enc, "b_enc": self.b_enc, "W_conv": self.W_conv,
                "w_head": self.w_head, "b_head": self.b_head}

    def encode(self, h_mat: np.ndarray) -> np.ndarray:
        if h_mat.ndim != 2 or h_mat.shape[1] != self.m_obs:
            raise ValueError(f"incidence shape {h_mat.shape} does not match "
                             f"model ({self.m_obs} hyperedge columns expected)")
        return np.tanh(h_mat @ self.W_enc.T + self.b_enc)


def init_embeddings(h_mat: np.ndarray, model: CheshireModel) -> np.ndarray:
    """x_i = tanh(W_enc h_i + b_enc) for every incidence row h_i."""
    return model.encode(h_mat)


def scaled_clique_laplacian(s: int) -> np.ndarray:
    """2L/lambda_max - I for the complete graph on s nodes: I - (2/s)J."""
    if s < 2:
        raise ValueError("clique size must be >= 2")
    return np.eye(s) - (2.0 / s) * np.ones((s, s))


def _cheby_stack(t: np.ndarray, lap: Optional[np.ndarray], k: int) -> list[np.ndarray]:
    # z1 = T, z2 = L T, zk = 2 L z(k-1) - z(k-2); t is (..., s, d)
    zs = [t]
    if k >= 2:
        zs.append(lap @ t)
    for _ in range(3, k + 1):
        zs.append(2.0 * (lap @ zs[-1]) - zs[-2])
    return zs


def clique_cheby_conv(x_s: np.ndarray, k: int, model: CheshireModel) -> np.ndarray:
    """Refined embeddings tanh(sum_k z_k W_k^T) for one candidate set."""
    s = x_s.shape[0]
    if s < 2:
        raise ValueError("candidate sets must have >= 2 nodes")
    lap = scaled_clique_laplacian(s) if k >= 2 else None
    zs = _cheby_stack(x_s, lap, k)
    u = sum(z @ model.W_conv[idx].T for idx, z in enumerate(zs))
    return np.tanh(u)


def pool(x_hat: np.ndarray) -> np.ndarray:
    """Concatenate column-wise root-mean-square and max-min range."""
    q = np.sqrt(np.mean(x_hat ** 2, axis=0))
    r = x_hat.max(axis=0) - x_hat.min(axis=0)
    return np.concatenate([q, r])


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    e = np.exp(z[np.logical_not(pos)])
    out[np.logical_not(pos)] = e / (1.0 + e)
    return out


def score(model: CheshireModel, s: Sequence[int],
          x: Optional[np.ndarray] = None) -> float:
    """Probability that s is a true hyperedge; exactly order-invariant
    because s is canonicalized before any arithmetic."""
    if x is None:
        x = model.X
    if x is None:
        raise FitError("model has no embeddings; train or load it first")
    nodes = tuple(sorted(s))
    if len(set(nodes)) != len(nodes):
        raise ValueError("candidate set has repeated nodes")
    if nodes[0] < 0 or nodes[-1] >= x.shape[0]:
        raise ValueError(f"candidate {nodes} has nodes outside the embedding table")
    x_hat = clique_cheby_conv(x[list(nodes)], model.params.cheby_order, model)
    logit = float(pool(x_hat) @ model.w_head + model.b_head[0])
    if logit >= 0:
        return 1.0 / (1.0 + math.exp(-logit))
    e = math.exp(logit)
    return e / (1.0 + e)


def score_many(model: CheshireModel, sets: Sequence[Sequence[int]]) -> np.ndarray:
    return np.array([score(model, s) for s in sets])


# ---------------------------------------------------------------------------
# training internals: grouped batch forward/backward with analytic gradients


def _group_forward(model: CheshireModel, x: np.ndarray, s_idx: np.ndarray):
    # s_idx: (B, s) int array of node ids, all candidates the same size s
    k = model.params.cheby_order
    s = s_idx.shape[1]
    lap = scaled_clique_laplacian(s) if k >= 2 else None
    t = x[s_idx]  # (B, s, d)
    zs = _cheby_stack(t, lap, k)
    u = np.zeros(t.shape[:2] + (model.params.conv_dim,))
    for idx, z in enumerate(zs):
        u += z @ model.W_conv[idx].T
    x_hat = np.tanh(u)
    q = np.sqrt(np.mean(x_hat ** 2, axis=1))          # (B, dc)
    r = x_hat.max(axis=1) - x_hat.min(axis=1)         # (B, dc)
    p = np.concatenate([q, r], axis=1)                # (B, 2dc)
    logits = p @ model.w_head + model.b_head[0]
    return {"lap": lap, "zs": zs, "x_hat": x_hat, "q": q, "p": p,
            "logits": logits, "s_idx": s_idx}


def _group_backward(model: CheshireModel, cache, dlogits: np.ndarray,
                    dx: np.ndarray, grads: dict[str, np.ndarray]) -> None:
    dc = model.params.conv_dim
    k = model.params.cheby_order
    x_hat, q, zs, lap = cache["x_hat"], cache["q"], cache["zs"], cache["lap"]
    b, s, _ = x_hat.shape

    grads["w_head"] += cache["p"].T @ dlogits
    grads["b_head"] += np.array([dlogits.sum()])
    dp = dlogits[:, None] * model.w_head[None, :]
    dq, dr = dp[:, :dc], dp[:, dc:]

    # q_j = sqrt(mean_i x_hat_ij^2) -> d x_hat = dq * x_hat / (s*q)
    safe_q = np.where(q > 0, q, 1.0)
    d_xhat = dq[:, None, :] * x_hat / (s * safe_q[:, None, :])
    d_xhat[np.broadcast_to((q == 0)[:, None, :], d_xhat.shape)] = 0.0
    # range pooling: +dr at the argmax entry, -dr at the argmin entry
    bi = np.arange(b)[:, None]
    ji = np.arange(dc)[None, :]
    d_xhat[bi, x_hat.argmax(axis=1), ji] += dr
    d_xhat[bi, x_hat.argmin(axis=1), ji] -= dr

    du = d_xhat * (1.0 - x_hat ** 2)
    gz = []
    for idx, z in enumerate(zs):
        grads["W_conv"][idx] += np.einsum("bsp,bsd->pd", du, z)
        gz.append(du @ model.W_conv[idx])
    # reverse the recursion z_k = 2 L z_{k-1} - z_{k-2}; L is symmetric
    for idx in range(k - 1, 1, -1):
        gz[idx - 1] += 2.0 * (lap @ gz[idx])
        gz[idx - 2] -= gz[idx]
    if k >= 2:
        gz[0] += lap @ gz[1]
    np.add.at(dx, cache["s_idx"].reshape(-1), gz[0].reshape(-1, dx.shape[1]))


def loss_and_grads(model: CheshireModel, h_mat: np.ndarray,
                   sets: Sequence[Sequence[int]], y: np.ndarray):
    """Mean BCE over the batch and analytic gradients for every weight."""
    pre = h_mat @ model.W_enc.T + model.b_enc
    x = np.tanh(pre)
    b_total = len(sets)
    groups: dict[int, list[int]] = {}
    for i, st in enumerate(sets):
        groups.setdefault(len(st), []).append(i)

    grads = {name: np.zeros_like(w) for name, w in model.weights().items()}
    dx = np.zeros_like(x)
    loss = 0.0
    for size in sorted(groups):
        idx = groups[size]
        s_idx = np.array([sorted(sets[i]) for i in idx], dtype=np.int64)
        cache = _group_forward(model, x, s_idx)
        logits = cache["logits"]
        yy = y[idx].astype(np.float64)
        # softplus(logit) - y*logit summed, then /B for the mean
        loss += float(np.sum(np.logaddexp(0.0, logits) - yy * logits))
        dlogits = (_sigmoid(logits) - yy) / b_total
        _group_backward(model, cache, dlogits, dx, grads)
    loss /= b_total

    dpre = dx * (1.0 - x ** 2)
    grads["W_enc"] += dpre.T @ h_mat
    grads["b_enc"] += dpre.sum(axis=0)
    return loss, grads


class _Adam:
    def __init__(self, weights: dict[str, np.ndarray], lr: float,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr, self.b1, self.b2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in weights.items()}
        self.v = {k: np.zeros_like(v) for k, v in weights.items()}

    def step(self, weights: dict[str, np.ndarray], grads: dict[str, np.ndarray]):
        self.t += 1
        c1 = 1.0 - self.b1 ** self.t
        c2 = 1.0 - self.b2 ** self.t
        for k, w in weights.items():
            g = grads[k]
            self.m[k] = self.b1 * self.m[k] + (1 - self.b1) * g
            self.v[k] = self.b2 * self.v[k] + (1 - self.b2) * g * g
            w -= self.lr * (self.m[k] / c1) / (np.sqrt(self.v[k] / c2) + self.eps)


def _corrupt(positive: tuple[int, ...], n: int, rng: np.random.Generator,
             forbidden: dict) -> tuple[int, ...]:
    # replace ceil(k/2) members with uniform non-member nodes; reject observed
    k = len(positive)
    c = (k + 1) // 2
    outside = np.array(sorted(set(range(n)) - set(positive)), dtype=np.int64)
    if len(outside) < c:
        raise SamplingError("not enough nodes outside the positive to corrupt it")
    for _ in range(_CORRUPT_ATTEMPT_BUDGET):
        drop = rng.choice(k, size=c, replace=False)
        kept = [positive[i] for i in range(k) if i not in set(drop.tolist())]
        new = rng.choice(outside, size=c, replace=False)
        cand = tuple(sorted(kept + new.tolist()))
        if cand not in forbidden:
            return cand
    raise SamplingError(f"could not corrupt positive {positive} into a "
                        f"non-observed set")


def train(h_obs: Hypergraph, params: CheshireParams = None) -> CheshireModel:
    """Fit the predictor on the observed hypergraph only.

    Positives are canonicalized (sorted) before any seeded shuffling, so the
    result does not depend on the storage order of the hyperedges.
    """
    if params is None:
        params = CheshireParams()
    if h_obs.m < MIN_TRAIN_HYPEREDGES:
        raise FitError(f"need at least {MIN_TRAIN_HYPEREDGES} observed "
                       f"hyperedges to train, got {h_obs.m}")
    positives = sorted(h_obs.hyperedges)
    canon = Hypergraph(h_obs.n, positives)
    h_mat = incidence(canon)

    rng = np.random.default_rng(params.seed)
    model = CheshireModel(params, canon.n, canon.m, rng)
    weights = model.weights()
    opt = _Adam(weights, params.learn_rate)

    for epoch in range(1, params.epochs + 1):
        items: list[tuple[int, ...]] = list(positives)
        labels: list[int] = [1] * len(positives)
        for pos in positives:
            for _ in range(params.train_neg_ratio):
                items.append(_corrupt(pos, canon.n, rng, canon.index))
                labels.append(0)
        order = rng.permutation(len(items))
        y = np.array(labels, dtype=np.float64)
        epoch_loss, seen = 0.0, 0
        for start in range(0, len(items), params.batch_size):
            batch = order[start:start + params.batch_size]
            bsets = [items[i] for i in batch]
            loss, grads = loss_and_grads(model, h_mat, bsets, y[batch])
            if not np.isfinite(loss):
                raise FitError(f"non-finite loss at epoch {epoch}")
            opt.step(weights, grads)
            epoch_loss += loss * len(batch)
            seen += len(batch)
        model.loss_history.append(epoch_loss / seen)

    model.X = model.encode(h_mat)
    return model


def save_model(model: CheshireModel, path) -> None:
    """Checkpoint as an npz archive (named float64 tensors, bit-exact)."""
    p = model.params
    meta = np.array([p.embed_dim, p.conv_dim, p.cheby_order, p.epochs,
                     p.batch_size, p.train_neg_ratio, p.seed, model.n,
                     model.m_obs], dtype=np.int64)
    if model.X is None:
        raise FitError("refusing to checkpoint a model without embeddings")
    np.savez(path, meta=meta, learn_rate=np.float64(p.learn_rate),
             W_enc=model.W_enc, b_enc=model.b_enc, W_conv=model.W_conv,
             w_head=model.w_head, b_head=model.b_head, X=model.X)


def load_model(path) -> CheshireModel:
    with np.load(path) as z:
        meta = z["meta"]
        params = CheshireParams(
            embed_dim=int(meta[0]), conv_dim=int(meta[1]),
            cheby_order=int(meta[2]), epochs=int(meta[3]),
            batch_size=int(meta[4]), train_neg_ratio=int(meta[5]),
            seed=int(meta[6]), learn_rate=float(z["learn_rate"]))
        model = CheshireModel(params, int(meta[7]), int(meta[8]))
        model.W_enc = z["W_enc"]
        model.b_enc = z["b_enc"]
        model.W_conv = z["W_conv"]
        model.w_head = z["w_head"]
        model.b_head = z["b_head"]
        model.X = z["X"]
    return model
