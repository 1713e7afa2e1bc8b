"""Embedding containers, normalization, distances, and class centroids.

All arithmetic is float64 regardless of on-disk precision. Matrices are
dense row-major.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateClass,
    DimensionMismatch,
    LabelOutOfRange,
    MissingClass,
    TooFewClasses,
    ZeroVector,
)

# Norms at or below this are degenerate rather than normalizable.
EPS_NORM = 1e-12


def _as_matrix(data) -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    return np.ascontiguousarray(arr)


@dataclass(frozen=True)
class EmbeddingSet:
    """An n x d matrix of finite real-valued feature embeddings."""

    data: np.ndarray

    def __post_init__(self):
        arr = _as_matrix(self.data)
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            r, c = np.argwhere(~np.isfinite(arr))[0]
            raise ValueError(f"non-finite entry at ({r}, {c})")
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class LabeledEmbeddingSet:
    """An EmbeddingSet plus one integer class id per row over C classes.

    By default every class id in [0, C) must appear at least once so
    every centroid is defined. Pass require_all_classes=False for label
    sets that only annotate rows (e.g. ground-truth target labels),
    where some classes may legitimately be absent.
    """

    embeddings: EmbeddingSet
    labels: np.ndarray
    num_classes: int
    require_all_classes: bool = True

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.shape[0] != self.embeddings.n:
            raise ValueError(
                f"labels must be 1-D of length {self.embeddings.n}, got shape {labels.shape}"
            )
        if self.num_classes < 2:
            raise TooFewClasses(self.num_classes)
        bad = (labels < 0) | (labels >= self.num_classes)
        if bad.any():
            raise LabelOutOfRange(int(labels[bad][0]), self.num_classes)
        if self.require_all_classes:
            present = np.bincount(labels, minlength=self.num_classes)
            if (present == 0).any():
                raise MissingClass(int(np.argmin(present > 0)))
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.embeddings.n

    @property
    def dim(self) -> int:
        return self.embeddings.dim


@dataclass(frozen=True)
class CentroidTable:
    """C unit-length class-centroid rows."""

    centroids: np.ndarray

    def __post_init__(self):
        arr = _as_matrix(self.centroids)
        if arr.shape[0] < 2:
            raise TooFewClasses(arr.shape[0])
        norms = np.linalg.norm(arr, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-6):
            raise ValueError("centroid rows must be unit length within 1e-6")
        object.__setattr__(self, "centroids", arr)

    @property
    def num_classes(self) -> int:
        return self.centroids.shape[0]

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]


def unit_normalize(e: EmbeddingSet) -> EmbeddingSet:
    """Scale every row to unit Euclidean norm.

    Raises ZeroVector for rows with norm <= EPS_NORM.
    """
    norms = np.linalg.norm(e.data, axis=1)
    small = norms <= EPS_NORM
    if small.any():
        raise ZeroVector(int(np.argmax(small)))
    return EmbeddingSet(e.data / norms[:, None])


def cosine_distance(u, v) -> float:
    """1 - u.v for unit vectors, clamped to [0, 2]."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(u.shape[-1], v.shape[-1])
    return float(min(max(1.0 - float(u @ v), 0.0), 2.0))


def euclidean_distance(u, v) -> float:
    """||u - v||_2."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(u.shape[-1], v.shape[-1])
    return float(np.linalg.norm(u - v))


def class_centroids(s: LabeledEmbeddingSet) -> CentroidTable:
    """Unit-normalized per-class sums of (already unit-normalized) rows.

    Summation is sequential in row order so results are reproducible.
    Raises DegenerateClass when a class's member rows cancel out.
    """
    data = s.embeddings.data
    sums = np.zeros((s.num_classes, s.dim), dtype=np.float64)
    np.add.at(sums, s.labels, data)
    norms = np.linalg.norm(sums, axis=1)
    small = norms <= EPS_NORM
    if small.any():
        raise DegenerateClass(int(np.argmax(small)))
    return CentroidTable(sums / norms[:, None])
