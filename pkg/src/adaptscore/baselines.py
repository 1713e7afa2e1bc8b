"""Symmetric baseline distances: Gaussian-kernel MMD, proxy A-distance,
and the classical silhouette.

All baselines run on unit-normalized embeddings for consistency with the
centroid scores.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .embed_core import EmbeddingSet, LabeledEmbeddingSet, unit_normalize
from .errors import (
    ConfigInvalid,
    DimensionMismatch,
    SingletonClass,
    TooFewClasses,
    TooFewSamples,
)

MEDIAN_HEURISTIC = "median_heuristic"


@dataclass(frozen=True)
class MmdConfig:
    bandwidth_policy: str = MEDIAN_HEURISTIC  # or "fixed"
    sigma: float = 1.0  # used only when bandwidth_policy == "fixed"
    max_samples_per_domain: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.bandwidth_policy not in (MEDIAN_HEURISTIC, "fixed"):
            raise ConfigInvalid(f"unknown bandwidth policy {self.bandwidth_policy!r}")
        if self.bandwidth_policy == "fixed" and not self.sigma > 0:
            raise ConfigInvalid("fixed bandwidth must be > 0")
        if self.max_samples_per_domain < 2:
            raise ConfigInvalid("max_samples_per_domain must be >= 2")


@dataclass(frozen=True)
class ProxyClassifierConfig:
    train_fraction: float = 0.5
    epochs: int = 200
    learning_rate: float = 0.01
    l2_penalty: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigInvalid("train_fraction must be in (0, 1)")
        if self.epochs < 1 or not self.learning_rate > 0 or self.l2_penalty < 0:
            raise ConfigInvalid("bad proxy classifier hyperparameters")


def _digest64(arr: np.ndarray) -> int:
    h = hashlib.blake2b(arr.tobytes(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def _subsample(data: np.ndarray, cap: int, seed: int, stream: int) -> np.ndarray:
    if data.shape[0] <= cap:
        return data
    rng = np.random.default_rng([seed, stream])
    idx = np.sort(rng.choice(data.shape[0], size=cap, replace=False))
    return data[idx]


def mmd_gaussian(source: EmbeddingSet, target: EmbeddingSet, cfg: MmdConfig) -> float:
    """Biased (V-statistic) squared-MMD with kernel exp(-||x-y||^2 / 2s^2).

    Domains above cfg.max_samples_per_domain are subsampled with a seeded
    RNG. Inputs below the cap are canonically ordered before the
    cross-kernel sum, so the estimate is exactly symmetric in its arguments.
    """
    if source.dim != target.dim:
        raise DimensionMismatch(source.dim, target.dim)
    if source.n < 2 or target.n < 2:
        raise TooFewSamples(2, min(source.n, target.n))

    s = _subsample(unit_normalize(source).data, cfg.max_samples_per_domain, cfg.seed, 0)
    t = _subsample(unit_normalize(target).data, cfg.max_samples_per_domain, cfg.seed, 1)

    if cfg.bandwidth_policy == "fixed":
        sigma = cfg.sigma
    else:
        pooled = np.vstack([s, t])
        # Median of the full pairwise multiset; order-independent.
        dists = cdist(pooled, pooled, "euclidean")
        sigma = float(np.median(dists))
        if sigma <= 0:
            sigma = 1.0

    gamma = 1.0 / (2.0 * sigma * sigma)
    # Canonical operand order keeps the cross-term summation identical
    # under argument swap.
    a, b = s, t
    if (b.shape[0], b.tobytes()) < (a.shape[0], a.tobytes()):
        a, b = b, a
    k_aa = np.exp(-gamma * cdist(a, a, "sqeuclidean"))
    k_bb = np.exp(-gamma * cdist(b, b, "sqeuclidean"))
    k_ab = np.exp(-gamma * cdist(a, b, "sqeuclidean"))
    value = float(np.mean(k_aa)) + float(np.mean(k_bb)) - 2.0 * float(np.mean(k_ab))
    return max(value, 0.0)


def _split_indices(n: int, seed_material: int) -> np.ndarray:
    """Seeded permutation for one domain, keyed on the domain's own bytes so
    argument order cannot change the split."""
    rng = np.random.default_rng([seed_material & 0xFFFFFFFF, seed_material >> 32])
    return rng.permutation(n)


def proxy_a_distance(source: EmbeddingSet, target: EmbeddingSet, cfg: ProxyClassifierConfig) -> float:
    """2 (1 - 2 e) where e is the held-out error of a linear domain
    classifier (logistic loss, full-batch gradient descent) separating
    source (label -1) from target (label +1), folded so e <= 1/2.

    The training stack is in a canonical row order and labels are +-1 with
    zero weight init, so swapping the arguments exactly negates the
    trajectory and returns the identical score.
    """
    if source.dim != target.dim:
        raise DimensionMismatch(source.dim, target.dim)
    if source.n < 4 or target.n < 4:
        raise TooFewSamples(4, min(source.n, target.n))

    s = unit_normalize(source).data
    t = unit_normalize(target).data

    def split(data):
        perm = _split_indices(data.shape[0], cfg.seed ^ _digest64(data))
        k = int(round(cfg.train_fraction * data.shape[0]))
        k = min(max(k, 1), data.shape[0] - 1)
        return data[perm[:k]], data[perm[k:]]

    s_train, s_test = split(s)
    t_train, t_test = split(t)

    # Canonical stacking order (independent of which argument is source).
    first_is_source = (s.shape[0], s.tobytes()) <= (t.shape[0], t.tobytes())
    if first_is_source:
        x_train = np.vstack([s_train, t_train])
        y_train = np.concatenate([-np.ones(len(s_train)), np.ones(len(t_train))])
        x_test = np.vstack([s_test, t_test])
        y_test = np.concatenate([-np.ones(len(s_test)), np.ones(len(t_test))])
    else:
        x_train = np.vstack([t_train, s_train])
        y_train = np.concatenate([np.ones(len(t_train)), -np.ones(len(s_train))])
        x_test = np.vstack([t_test, s_test])
        y_test = np.concatenate([np.ones(len(t_test)), -np.ones(len(s_test))])

    xb = np.hstack([x_train, np.ones((x_train.shape[0], 1))])
    w = np.zeros(xb.shape[1])
    n = xb.shape[0]
    for _ in range(cfg.epochs):
        z = xb @ w
        # d/dw mean log(1 + exp(-y z)) = -X^T (y * sigmoid(-y z)) / n
        yz = y_train * z
        sig = 1.0 / (1.0 + np.exp(np.clip(yz, -500, 500)))
        grad = -(xb.T @ (y_train * sig)) / n + cfg.l2_penalty * w
        w = w - cfg.learning_rate * grad

    xt = np.hstack([x_test, np.ones((x_test.shape[0], 1))])
    pred = np.where(xt @ w > 0.0, 1.0, -1.0)
    err = float(np.mean(pred != y_test))
    err = min(err, 1.0 - err)
    return 2.0 * (1.0 - 2.0 * err)


def silhouette(data: LabeledEmbeddingSet, metric: str = "cosine") -> float:
    """Classical mean silhouette (b - a) / max(a, b) with self-exclusion.

    metric is "cosine" (on unit-normalized rows) or "euclidean".
    """
    if metric not in ("cosine", "euclidean"):
        raise ConfigInvalid(f"unknown metric {metric!r}")
    if data.num_classes < 2:
        raise TooFewClasses(data.num_classes)
    counts = np.bincount(data.labels, minlength=data.num_classes)
    if (counts < 2).any():
        raise SingletonClass(int(np.argmax(counts < 2)))

    if metric == "cosine":
        x = unit_normalize(data.embeddings).data
        dist = np.clip(1.0 - x @ x.T, 0.0, 2.0)
    else:
        x = unit_normalize(data.embeddings).data
        dist = cdist(x, x, "euclidean")

    labels = data.labels
    n = data.n
    scores = np.empty(n)
    for i in range(n):
        same = labels == labels[i]
        a = (dist[i, same].sum() - dist[i, i]) / (same.sum() - 1)
        b = np.inf
        for c in range(data.num_classes):
            if c == labels[i]:
                continue
            b = min(b, dist[i, labels == c].mean())
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0.0 else (b - a) / denom
    return float(scores.mean())
