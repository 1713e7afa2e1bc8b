"""Potential-adaptability scoring: PAS, its oracle, and design variants.

Every scorer follows the same pipeline: unit-normalize, build source class
centroids, compute per-target distances to C class representatives, take
the two smallest (d1 <= d2), and average a per-sample contribution.

Per-target work runs in fixed-size row blocks that may be dispatched to a
thread pool; the block grid and the final summation order are independent
of the worker count, so multi-threaded results are bit-identical to a
sequential run.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .embed_core import (
    CentroidTable,
    EmbeddingSet,
    LabeledEmbeddingSet,
    class_centroids,
    unit_normalize,
)
from .errors import DimensionMismatch, LabelOutOfRange, TooFewClasses

_BLOCK_ROWS = 8192

METHOD_PAS = "pas"
METHOD_PAS_EUCLIDEAN = "pas_euclidean"
METHOD_PAS_AVG_PAIRWISE = "pas_avg_pairwise"
METHOD_ORACLE = "oracle"


def worker_count() -> int:
    """Worker cap from ADAPTSCORE_THREADS (0 or unset means auto)."""
    raw = os.environ.get("ADAPTSCORE_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


@dataclass(frozen=True)
class PerSampleBreakdown:
    sample_index: int
    d1: float
    d2: float
    nearest_class: int
    contribution: float


@dataclass(frozen=True)
class ScoreResult:
    method: str
    value: float
    breakdown: list
    n_target: int
    n_source: int
    num_classes: int

    def breakdown_arrays(self):
        """(d1, d2, nearest_class, contribution) as numpy columns."""
        d1 = np.array([b.d1 for b in self.breakdown])
        d2 = np.array([b.d2 for b in self.breakdown])
        nearest = np.array([b.nearest_class for b in self.breakdown])
        contrib = np.array([b.contribution for b in self.breakdown])
        return d1, d2, nearest, contrib


def _check_pair(source: LabeledEmbeddingSet, target: EmbeddingSet):
    if source.num_classes < 2:
        raise TooFewClasses(source.num_classes)
    if source.dim != target.dim:
        raise DimensionMismatch(source.dim, target.dim)


def _block_ranges(n: int):
    return [(lo, min(lo + _BLOCK_ROWS, n)) for lo in range(0, n, _BLOCK_ROWS)]


def _run_blocks(fn, n: int):
    ranges = _block_ranges(n)
    workers = min(worker_count(), len(ranges))
    if workers <= 1:
        for lo, hi in ranges:
            fn(lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda r: fn(*r), ranges))


def _two_smallest(dist_block: np.ndarray):
    """Per row: the two smallest distances and the argmin (lowest class id
    among minimizers, since argmin returns the first occurrence)."""
    nearest = dist_block.argmin(axis=1)
    part = np.partition(dist_block, 1, axis=1)
    d1 = part[:, 0]
    d2 = part[:, 1]
    return d1, d2, nearest


def _pas_contribution(d1: np.ndarray, d2: np.ndarray) -> np.ndarray:
    # 0/0 convention: d2 == 0 forces d1 == 0 too; no preference -> 0.
    out = np.zeros_like(d1)
    nz = d2 > 0.0
    out[nz] = (d2[nz] - d1[nz]) / d2[nz]
    return out


def _assemble(method, d1, d2, nearest, contrib, n_source, num_classes) -> ScoreResult:
    n = contrib.shape[0]
    value = float(np.sum(contrib) / n)
    breakdown = [
        PerSampleBreakdown(i, float(d1[i]), float(d2[i]), int(nearest[i]), float(contrib[i]))
        for i in range(n)
    ]
    return ScoreResult(method, value, breakdown, n, n_source, num_classes)


def _centroid_pipeline(source: LabeledEmbeddingSet, target: EmbeddingSet):
    _check_pair(source, target)
    src_unit = unit_normalize(source.embeddings)
    centroids = class_centroids(
        LabeledEmbeddingSet(src_unit, source.labels, source.num_classes)
    )
    tgt_unit = unit_normalize(target)
    return tgt_unit, centroids


def _score_against_rows(target_unit: EmbeddingSet, rows: np.ndarray, dist_kind: str):
    """d1/d2/nearest/contribution of each target row against C reference
    rows, blockwise."""
    n = target_unit.n
    tdata = target_unit.data
    d1 = np.empty(n)
    d2 = np.empty(n)
    nearest = np.empty(n, dtype=np.int64)
    contrib = np.empty(n)

    def block(lo, hi):
        sims = tdata[lo:hi] @ rows.T
        if dist_kind == "cosine":
            dist = np.clip(1.0 - sims, 0.0, 2.0)
        else:  # euclidean between unit rows and unit reference rows
            sq = np.clip(2.0 - 2.0 * sims, 0.0, None)
            dist = np.sqrt(sq)
        b1, b2, bn = _two_smallest(dist)
        d1[lo:hi] = b1
        d2[lo:hi] = b2
        nearest[lo:hi] = bn
        contrib[lo:hi] = _pas_contribution(b1, b2)

    _run_blocks(block, n)
    return d1, d2, nearest, contrib


def pas(source: LabeledEmbeddingSet, target: EmbeddingSet) -> ScoreResult:
    """Mean over target samples of (d2 - d1) / d2, where d1, d2 are the two
    smallest cosine distances to the source class centroids."""
    tgt_unit, centroids = _centroid_pipeline(source, target)
    d1, d2, nearest, contrib = _score_against_rows(tgt_unit, centroids.centroids, "cosine")
    return _assemble(METHOD_PAS, d1, d2, nearest, contrib, source.n, source.num_classes)


def pas_euclidean(source: LabeledEmbeddingSet, target: EmbeddingSet) -> ScoreResult:
    """PAS with the Euclidean distance between unit-normalized rows and
    centroids in place of the cosine distance."""
    tgt_unit, centroids = _centroid_pipeline(source, target)
    d1, d2, nearest, contrib = _score_against_rows(tgt_unit, centroids.centroids, "euclidean")
    return _assemble(
        METHOD_PAS_EUCLIDEAN, d1, d2, nearest, contrib, source.n, source.num_classes
    )


def pas_avg_pairwise(source: LabeledEmbeddingSet, target: EmbeddingSet) -> ScoreResult:
    """PAS variant where each class distance is the mean cosine distance to
    all members of the class rather than to its centroid.

    mean_j (1 - t.s_j) = 1 - t.mean_j(s_j), so the per-class raw means of
    the unit rows stand in for the centroid table.
    """
    _check_pair(source, target)
    src_unit = unit_normalize(source.embeddings)
    sums = np.zeros((source.num_classes, source.dim))
    np.add.at(sums, source.labels, src_unit.data)
    counts = np.bincount(source.labels, minlength=source.num_classes).astype(np.float64)
    means = sums / counts[:, None]
    tgt_unit = unit_normalize(target)

    n = tgt_unit.n
    d1 = np.empty(n)
    d2 = np.empty(n)
    nearest = np.empty(n, dtype=np.int64)
    contrib = np.empty(n)

    def block(lo, hi):
        dist = np.clip(1.0 - tgt_unit.data[lo:hi] @ means.T, 0.0, 2.0)
        b1, b2, bn = _two_smallest(dist)
        d1[lo:hi] = b1
        d2[lo:hi] = b2
        nearest[lo:hi] = bn
        contrib[lo:hi] = _pas_contribution(b1, b2)

    _run_blocks(block, n)
    return _assemble(
        METHOD_PAS_AVG_PAIRWISE, d1, d2, nearest, contrib, source.n, source.num_classes
    )


def oracle_score(source: LabeledEmbeddingSet, target: LabeledEmbeddingSet) -> ScoreResult:
    """Label-aware PAS variant: d1 is the cosine distance to the true-class
    centroid, d2 the smallest distance among the other centroids, and the
    contribution is (d2 - d1) / max(d1, d2) in [-1, 1]."""
    tgt_unit, centroids = _centroid_pipeline(source, target.embeddings)
    labels = target.labels
    if labels.max() >= source.num_classes or labels.min() < 0:
        bad = labels[(labels < 0) | (labels >= source.num_classes)][0]
        raise LabelOutOfRange(int(bad), source.num_classes)

    n = tgt_unit.n
    d1 = np.empty(n)
    d2 = np.empty(n)
    nearest = np.empty(n, dtype=np.int64)
    contrib = np.empty(n)
    rows = centroids.centroids

    def block(lo, hi):
        dist = np.clip(1.0 - tgt_unit.data[lo:hi] @ rows.T, 0.0, 2.0)
        nearest[lo:hi] = dist.argmin(axis=1)
        true = labels[lo:hi]
        idx = np.arange(hi - lo)
        b1 = dist[idx, true]
        masked = dist.copy()
        masked[idx, true] = np.inf
        b2 = masked.min(axis=1)
        d1[lo:hi] = b1
        d2[lo:hi] = b2
        denom = np.maximum(b1, b2)
        out = np.zeros(hi - lo)
        nz = denom > 0.0
        out[nz] = (b2[nz] - b1[nz]) / denom[nz]
        contrib[lo:hi] = out

    _run_blocks(block, n)
    return _assemble(METHOD_ORACLE, d1, d2, nearest, contrib, source.n, source.num_classes)
