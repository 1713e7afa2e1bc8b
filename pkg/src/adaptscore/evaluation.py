"""Correlation statistics, candidate ranking, and the subsample-robustness
study."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .embed_core import EmbeddingSet, LabeledEmbeddingSet
from .errors import (
    ConstantInput,
    EmptyClassAfterSubsample,
    LengthMismatch,
    MissingScore,
)
from .scores import pas


@dataclass(frozen=True)
class CandidateScoreRow:
    candidate_id: str
    method_scores: dict
    accuracy: float | None = None  # percent, when known externally


@dataclass(frozen=True)
class CorrelationResult:
    pearson: float
    spearman: float
    n: int


@dataclass
class SubsampleStudyResult:
    fractions: list
    candidate_ids: list
    # scores[f_idx][candidate_idx] is the list of per-repeat scores
    scores: list
    # rankings[f_idx][repeat] is an ordered candidate-id list
    rankings: list
    full_ranking: list
    # rank_match_fraction[f_idx]: share of repeats matching the full ranking
    rank_match_fraction: list
    rank_stable: list  # all repeats match


def _validated_xy(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(x.shape[0], y.shape[0])
    if x.shape[0] < 2:
        raise LengthMismatch(x.shape[0], y.shape[0])
    if np.ptp(x) == 0.0 and np.ptp(y) == 0.0:
        raise ConstantInput()
    return x, y


def pearson(x, y) -> float:
    """Sample Pearson correlation coefficient."""
    x, y = _validated_xy(x, y)
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt(np.sum(xc * xc) * np.sum(yc * yc))
    if denom == 0.0:
        # One side constant: correlation undefined; report 0 like a
        # regression slope of zero evidence.
        return 0.0
    return float(np.sum(xc * yc) / denom)


def spearman(x, y) -> float:
    """Pearson correlation of average-rank vectors."""
    x, y = _validated_xy(x, y)
    return pearson(rankdata(x), rankdata(y))


def correlate(x, y) -> CorrelationResult:
    x = np.asarray(x, dtype=np.float64)
    return CorrelationResult(pearson(x, y), spearman(x, y), n=x.shape[0])


def rank_candidates(rows, method: str) -> list:
    """Candidate ids sorted descending by the given method's score, ties
    broken by lexicographic candidate id. The head is the selection."""
    for row in rows:
        if method not in row.method_scores:
            raise MissingScore(row.candidate_id, method)
    return [
        r.candidate_id
        for r in sorted(rows, key=lambda r: (-r.method_scores[method], r.candidate_id))
    ]


def derive_seed(base_seed: int, fraction: float, repeat: int, candidate_index: int) -> int:
    """Reproducible per-cell seed: base_seed XOR blake2b-64 of the canonical
    string "subsample:<fraction-float64-hex>:<repeat>:<candidate_index>".

    This formula is part of the external contract so studies reproduce
    across machines.
    """
    key = f"subsample:{float(fraction).hex()}:{repeat}:{candidate_index}".encode()
    h = int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")
    return (base_seed ^ h) & 0xFFFFFFFFFFFFFFFF


def _stratified_subsample(source: LabeledEmbeddingSet, fraction: float, rng) -> LabeledEmbeddingSet:
    keep = []
    for c in range(source.num_classes):
        members = np.flatnonzero(source.labels == c)
        k = max(1, int(round(fraction * members.shape[0])))
        keep.append(rng.choice(members, size=k, replace=False))
    idx = np.sort(np.concatenate(keep))
    return LabeledEmbeddingSet(
        EmbeddingSet(source.embeddings.data[idx]), source.labels[idx], source.num_classes
    )


def _uniform_subsample(target: EmbeddingSet, fraction: float, rng) -> EmbeddingSet:
    k = max(1, int(round(fraction * target.n)))
    idx = np.sort(rng.choice(target.n, size=k, replace=False))
    return EmbeddingSet(target.data[idx])


def subsample_study(
    sources,
    target: EmbeddingSet,
    fractions,
    repeats: int,
    base_seed: int,
    candidate_ids=None,
) -> SubsampleStudyResult:
    """PAS stability under joint source/target subsampling.

    Fraction 1.0 bypasses the sampling path entirely, so its row is
    bit-identical to direct scoring. Stratified source sampling keeps at
    least one sample per class; a draw that still loses a class is retried
    up to 10 times before raising EmptyClassAfterSubsample.
    """
    fractions = [float(f) for f in fractions]
    if any(not 0.0 < f <= 1.0 for f in fractions) or fractions != sorted(fractions):
        raise ValueError("fractions must be ascending values in (0, 1]")
    if candidate_ids is None:
        candidate_ids = [f"candidate_{i}" for i in range(len(sources))]

    full_scores = [pas(src, target).value for src in sources]
    full_ranking = rank_candidates(
        [CandidateScoreRow(cid, {"pas": v}) for cid, v in zip(candidate_ids, full_scores)],
        "pas",
    )

    scores = []
    rankings = []
    match_fraction = []
    stable = []
    for f in fractions:
        f_scores = [[] for _ in sources]
        f_rankings = []
        matches = 0
        for r in range(repeats):
            rep_scores = []
            for ci, src in enumerate(sources):
                if f == 1.0:
                    rep_scores.append(full_scores[ci])
                    continue
                rng = np.random.default_rng(derive_seed(base_seed, f, r, ci))
                value = None
                for _ in range(10):
                    try:
                        sub_src = _stratified_subsample(src, f, rng)
                    except Exception:
                        continue
                    sub_tgt = _uniform_subsample(target, f, rng)
                    value = pas(sub_src, sub_tgt).value
                    break
                if value is None:
                    raise EmptyClassAfterSubsample(-1)
                rep_scores.append(value)
            for ci, v in enumerate(rep_scores):
                f_scores[ci].append(v)
            ranking = rank_candidates(
                [CandidateScoreRow(cid, {"pas": v}) for cid, v in zip(candidate_ids, rep_scores)],
                "pas",
            )
            f_rankings.append(ranking)
            if ranking == full_ranking:
                matches += 1
        scores.append(f_scores)
        rankings.append(f_rankings)
        match_fraction.append(matches / repeats if repeats else 1.0)
        stable.append(matches == repeats)

    return SubsampleStudyResult(
        fractions=fractions,
        candidate_ids=list(candidate_ids),
        scores=scores,
        rankings=rankings,
        full_ranking=full_ranking,
        rank_match_fraction=match_fraction,
        rank_stable=stable,
    )
