import numpy as np
import pytest

from adaptscore import (
    CandidateScoreRow,
    EmbeddingSet,
    pas,
    pearson,
    rank_candidates,
    spearman,
    subsample_study,
)
from adaptscore.errors import ConstantInput, LengthMismatch, MissingScore
from adaptscore.evaluation import derive_seed
from conftest import random_labeled
from reference_tables import OFFICE_31_RESNET50, OFFICE_HOME_RESNET50, flat


class TestPearson:
    def test_exact_linear(self):
        assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)

    def test_exact_antilinear(self):
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_reference_row(self):
        x, y = flat(OFFICE_31_RESNET50)
        assert pearson(x, y) == pytest.approx(0.73, abs=0.01)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            pearson([1, 2], [1, 2, 3])

    def test_constant_input(self):
        with pytest.raises(ConstantInput):
            pearson([1, 1, 1], [2, 2, 2])

    def test_symmetric(self, rng):
        x = rng.standard_normal(15)
        y = rng.standard_normal(15)
        assert pearson(x, y) == pytest.approx(pearson(y, x), abs=1e-12)


class TestSpearman:
    def test_monotone_transform_gives_one(self, rng):
        x = rng.standard_normal(20)
        y = np.exp(x)
        assert spearman(x, y) == pytest.approx(1.0)

    def test_reference_rows(self):
        x31, y31 = flat(OFFICE_31_RESNET50)
        assert spearman(x31, y31) == pytest.approx(0.66, abs=0.01)
        xoh, yoh = flat(OFFICE_HOME_RESNET50)
        assert spearman(xoh, yoh) == pytest.approx(0.82, abs=0.01)

    def test_monotone_invariance_exact(self, rng):
        x = rng.standard_normal(12)
        y = rng.standard_normal(12)
        base = spearman(x, y)
        assert spearman(np.exp(x), y) == base
        assert spearman(x, 3 * y + 10) == base

    def test_symmetric(self, rng):
        x = rng.standard_normal(15)
        y = rng.standard_normal(15)
        assert spearman(x, y) == pytest.approx(spearman(y, x), abs=1e-12)


class TestRankCandidates:
    def test_selects_highest(self):
        rows = [
            CandidateScoreRow("D", {"pas": 0.265}),
            CandidateScoreRow("W", {"pas": 0.239}),
        ]
        assert rank_candidates(rows, "pas") == ["D", "W"]

    def test_lexicographic_tie_break(self):
        rows = [CandidateScoreRow("b", {"pas": 0.5}), CandidateScoreRow("a", {"pas": 0.5})]
        assert rank_candidates(rows, "pas")[0] == "a"

    def test_single_candidate(self):
        rows = [CandidateScoreRow("only", {"pas": 0.1})]
        assert rank_candidates(rows, "pas") == ["only"]

    def test_missing_score(self):
        rows = [CandidateScoreRow("x", {"mmd": 0.1})]
        with pytest.raises(MissingScore):
            rank_candidates(rows, "pas")

    def test_increasing_transform_invariance(self, rng):
        scores = rng.uniform(0, 1, size=8)
        ids = [f"c{i}" for i in range(8)]
        base = rank_candidates(
            [CandidateScoreRow(i, {"pas": s}) for i, s in zip(ids, scores)], "pas"
        )
        transformed = rank_candidates(
            [CandidateScoreRow(i, {"pas": np.exp(3 * s)}) for i, s in zip(ids, scores)], "pas"
        )
        assert base == transformed


class TestSubsampleStudy:
    def test_fraction_one_bit_identical(self, rng):
        sources = [random_labeled(rng, n_per_class=30, num_classes=4, dim=6) for _ in range(2)]
        target = EmbeddingSet(rng.standard_normal((80, 6)))
        direct = [pas(s, target).value for s in sources]
        res = subsample_study(sources, target, [1.0], repeats=3, base_seed=9)
        for ci, v in enumerate(direct):
            assert all(x == v for x in res.scores[0][ci])
        assert res.rank_stable[0]

    def test_rankings_recorded_per_repeat(self, rng):
        sources = [random_labeled(rng, n_per_class=40, num_classes=4, dim=6, spread=sp)
                   for sp in (0.1, 0.6)]
        target = EmbeddingSet(rng.standard_normal((100, 6)))
        res = subsample_study(sources, target, [0.5, 1.0], repeats=4, base_seed=3)
        assert len(res.rankings[0]) == 4
        assert all(sorted(r) == sorted(res.candidate_ids) for r in res.rankings[0])

    def test_bad_fractions(self, rng):
        sources = [random_labeled(rng)]
        target = EmbeddingSet(rng.standard_normal((10, 8)))
        with pytest.raises(ValueError):
            subsample_study(sources, target, [0.5, 0.1], repeats=1, base_seed=0)
        with pytest.raises(ValueError):
            subsample_study(sources, target, [0.0, 1.0], repeats=1, base_seed=0)

    def test_reproducible(self, rng):
        sources = [random_labeled(rng, n_per_class=25, num_classes=3, dim=5)]
        target = EmbeddingSet(rng.standard_normal((50, 5)))
        a = subsample_study(sources, target, [0.4], repeats=3, base_seed=17)
        b = subsample_study(sources, target, [0.4], repeats=3, base_seed=17)
        assert a.scores == b.scores


class TestDeriveSeed:
    def test_stable_and_distinct(self):
        s1 = derive_seed(42, 0.25, 3, 1)
        assert s1 == derive_seed(42, 0.25, 3, 1)
        assert s1 != derive_seed(42, 0.25, 3, 2)
        assert s1 != derive_seed(42, 0.25, 4, 1)
        assert s1 != derive_seed(42, 0.5, 3, 1)
        assert 0 <= s1 < 2**64
