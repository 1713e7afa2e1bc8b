import numpy as np
import pytest

from adaptscore import (
    EmbeddingSet,
    LabeledEmbeddingSet,
    class_centroids,
    cosine_distance,
    euclidean_distance,
    unit_normalize,
)
from adaptscore.errors import (
    DegenerateClass,
    DimensionMismatch,
    MissingClass,
    ZeroVector,
)
from conftest import random_labeled, random_orthogonal


class TestUnitNormalize:
    def test_three_four_five(self):
        out = unit_normalize(EmbeddingSet([[3.0, 4.0]]))
        np.testing.assert_allclose(out.data, [[0.6, 0.8]])

    def test_already_unit(self):
        e = EmbeddingSet([[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_array_equal(unit_normalize(e).data, e.data)

    def test_zero_row(self):
        with pytest.raises(ZeroVector) as exc:
            unit_normalize(EmbeddingSet([[0.0, 0.0]]))
        assert exc.value.row_index == 0

    def test_idempotent(self, rng):
        e = EmbeddingSet(rng.standard_normal((50, 7)))
        once = unit_normalize(e)
        twice = unit_normalize(once)
        np.testing.assert_allclose(twice.data, once.data, atol=1e-9)


class TestDistances:
    @pytest.mark.parametrize(
        "u,v,expected",
        [((1, 0), (1, 0), 0.0), ((1, 0), (0, 1), 1.0), ((1, 0), (-1, 0), 2.0)],
    )
    def test_cosine_examples(self, u, v, expected):
        assert cosine_distance(u, v) == pytest.approx(expected, abs=1e-12)

    def test_cosine_symmetric_and_self_zero(self, rng):
        for _ in range(20):
            u = rng.standard_normal(5)
            u /= np.linalg.norm(u)
            v = rng.standard_normal(5)
            v /= np.linalg.norm(v)
            assert cosine_distance(u, v) == cosine_distance(v, u)
            assert cosine_distance(u, u) == pytest.approx(0.0, abs=1e-12)

    def test_cosine_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cosine_distance((1, 0), (1, 0, 0))

    @pytest.mark.parametrize(
        "u,v,expected",
        [((1, 0), (1, 0), 0.0), ((1, 0), (0, 1), np.sqrt(2)), ((0, 0), (3, 4), 5.0)],
    )
    def test_euclidean_examples(self, u, v, expected):
        assert euclidean_distance(u, v) == pytest.approx(expected, abs=1e-12)

    def test_euclidean_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            euclidean_distance((1,), (1, 0))


class TestClassCentroids:
    def test_symmetric_pair(self):
        s = LabeledEmbeddingSet(
            EmbeddingSet([[1.0, 0.0], [0.0, 1.0], [0.0, 1.0], [1.0, 0.0]]),
            [0, 0, 1, 1],
            2,
        )
        table = class_centroids(s)
        r = 1 / np.sqrt(2)
        np.testing.assert_allclose(table.centroids[0], [r, r], atol=1e-12)

    def test_identical_members(self):
        s = LabeledEmbeddingSet(
            EmbeddingSet([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), [0, 0, 1], 2
        )
        np.testing.assert_allclose(class_centroids(s).centroids[0], [1, 0])

    def test_antipodal_cancellation(self):
        s = LabeledEmbeddingSet(
            EmbeddingSet([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]]), [0, 0, 1], 2
        )
        with pytest.raises(DegenerateClass) as exc:
            class_centroids(s)
        assert exc.value.class_id == 0

    def test_missing_class_at_construction(self):
        with pytest.raises(MissingClass):
            LabeledEmbeddingSet(EmbeddingSet([[1.0, 0.0]]), [0], 2)

    def test_unit_norm_rows(self, rng):
        s = random_labeled(rng)
        table = class_centroids(
            LabeledEmbeddingSet(unit_normalize(s.embeddings), s.labels, s.num_classes)
        )
        norms = np.linalg.norm(table.centroids, axis=1)
        np.testing.assert_allclose(norms, 1.0, atol=1e-6)

    def test_orthogonal_commutes(self, rng):
        s = random_labeled(rng, dim=6)
        normed = LabeledEmbeddingSet(unit_normalize(s.embeddings), s.labels, s.num_classes)
        base = class_centroids(normed).centroids
        q = random_orthogonal(rng, 6)
        rotated = LabeledEmbeddingSet(
            EmbeddingSet(normed.embeddings.data @ q.T), s.labels, s.num_classes
        )
        np.testing.assert_allclose(class_centroids(rotated).centroids, base @ q.T, atol=1e-6)

    def test_per_sample_scale_absorbed(self, rng):
        s = random_labeled(rng)
        scales = rng.uniform(0.1, 10.0, size=s.n)
        scaled = LabeledEmbeddingSet(
            EmbeddingSet(s.embeddings.data * scales[:, None]), s.labels, s.num_classes
        )
        a = class_centroids(
            LabeledEmbeddingSet(unit_normalize(s.embeddings), s.labels, s.num_classes)
        )
        b = class_centroids(
            LabeledEmbeddingSet(unit_normalize(scaled.embeddings), s.labels, s.num_classes)
        )
        np.testing.assert_allclose(a.centroids, b.centroids, atol=1e-12)


class TestContainers:
    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            EmbeddingSet([[1.0, np.nan]])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            EmbeddingSet(np.empty((0, 3)))

    def test_label_length_checked(self):
        with pytest.raises(ValueError):
            LabeledEmbeddingSet(EmbeddingSet([[1.0, 0.0]]), [0, 1], 2)
