import math

import numpy as np
import pytest
from scipy.cluster.hierarchy import linkage

from fmgraph.analysis import (
    FeatureMatrix,
    alternatives_choquet_profile,
    hierarchical_cluster,
    integral_comparison,
    measure_features,
    measure_summary,
    subset_features,
)
from fmgraph.integrals import choquet
from fmgraph.io import table1
from fmgraph.lattice import additive_from_weights, max_measure, min_measure, uniform_additive
from fmgraph.sampling import GeneratorConfig, random_batch, random_measure


class TestFeatures:
    def test_subset_shape(self):
        fm = subset_features(random_measure(GeneratorConfig(4, 1)), ("mu", "n"))
        assert fm.shape == (16, 2)
        assert fm.columns == ("mu", "nonadditivity")
        assert fm.row_ids[5] == "{1,3}"

    def test_additive_zero_columns(self):
        fm = subset_features(additive_from_weights((0.1, 0.2, 0.3, 0.4)), ("nonadditivity", "nonmodularity"))
        np.testing.assert_allclose(fm.data, 0, atol=1e-12)

    def test_empty_row(self):
        fm = subset_features(random_measure(GeneratorConfig(3, 2)), ("mu", "m", "n", "d"))
        np.testing.assert_array_equal(fm.data[0], 0)

    def test_unknown(self):
        with pytest.raises(ValueError):
            subset_features(uniform_additive(3), ("bogus",))
        with pytest.raises(ValueError):
            measure_features([uniform_additive(3)], ("bogus",))

    def test_missing_cells(self):
        with pytest.raises(ValueError):
            FeatureMatrix(("a",), ("x",), [[np.nan]])

    def test_standardize(self):
        fm = measure_features(random_batch(GeneratorConfig(4, 3, 30)))
        z = fm.standardize()
        np.testing.assert_allclose(z.data.mean(axis=0), 0, atol=1e-9)
        np.testing.assert_allclose(z.data.std(axis=0), 1, atol=1e-9)
        assert z.standardized == (True, True)

    def test_constant_column_flagged(self):
        fm = FeatureMatrix(("a", "b", "c"), ("x", "y"), [[1.0, 2.0], [1.0, 3.0], [1.0, 5.0]]).standardize()
        assert fm.constant == (True, False)
        np.testing.assert_array_equal(fm.data[:, 0], 1.0)

    def test_values_mode(self):
        fm = measure_features([uniform_additive(3), min_measure(3)], ("values",))
        assert fm.shape == (2, 8)


class TestClustering:
    def test_identical_rows(self):
        fm = FeatureMatrix(("a", "b", "c"), ("x",), [[1.0], [1.0], [5.0]])
        d = hierarchical_cluster(fm, standardize=False)
        assert (d.merges[0].left, d.merges[0].right, d.merges[0].height) == (0, 1, 0.0)

    def test_collinear(self):
        fm = FeatureMatrix(("p", "q", "r"), ("x",), [[0.0], [1.0], [10.0]])
        d = hierarchical_cluster(fm)
        assert {d.merges[0].left, d.merges[0].right} == {0, 1}

    def test_single_row(self):
        with pytest.raises(ValueError):
            hierarchical_cluster(FeatureMatrix(("a",), ("x",), [[1.0]]))

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_scipy_heights(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=(15, 3))
        fm = FeatureMatrix(tuple(str(i) for i in range(15)), ("a", "b", "c"), x)
        d = hierarchical_cluster(fm, standardize=False)
        ref = linkage(x, method="average", metric="euclidean")
        np.testing.assert_allclose([m.height for m in d.merges], ref[:, 2], atol=1e-12)
        assert sorted(d.leaf_order) == list(range(15))
        assert all(a.height <= b.height + 1e-12 for a, b in zip(d.merges, d.merges[1:]))

    def test_permutation_invariance(self):
        rng = np.random.default_rng(9)
        x = rng.normal(size=(12, 2))
        labels = [f"r{i}" for i in range(12)]
        perm = rng.permutation(12)
        a = hierarchical_cluster(FeatureMatrix(tuple(labels), ("u", "v"), x))
        b = hierarchical_cluster(FeatureMatrix(tuple(labels[i] for i in perm), ("u", "v"), x[perm]))
        sa = sorted((sorted(s), round(h, 12)) for s, h in a.structure(labels))
        sb = sorted((sorted(s), round(h, 12)) for s, h in b.structure([labels[i] for i in perm]))
        assert sa == sb

    def test_linkage_matrix(self):
        fm = FeatureMatrix(("a", "b", "c"), ("x",), [[0.0], [1.0], [10.0]])
        lm = hierarchical_cluster(fm, standardize=False).linkage_matrix()
        assert lm.shape == (2, 4)
        assert lm[-1, 3] == 3


class TestSummaries:
    def test_anchors(self):
        s = measure_summary(uniform_additive(4))
        assert s.entropy == pytest.approx(math.log(4)) and s.orness == pytest.approx(0.5)
        assert s.flags["additive"] and s.flags["symmetric"]
        s = measure_summary(min_measure(4))
        assert (s.entropy, s.orness) == (0.0, 0.0)
        s = measure_summary(max_measure(4))
        assert (s.entropy, s.orness) == (0.0, 1.0)


class TestComparisons:
    def test_fig13_shape(self):
        res = integral_comparison((0.2, 0.5, 0.75, 1.0), GeneratorConfig(4, 7, 200))
        assert res.values.shape == (200, 3)
        assert res.frac_sugeno_ge_pan == 1.0
        c, s, n = res.medians
        assert c >= s >= n
        assert np.all(res.values[:, 1] >= res.values[:, 2])

    def test_constant_input(self):
        res = integral_comparison((0.3, 0.3, 0.3), GeneratorConfig(3, 1, 20))
        np.testing.assert_allclose(res.values, 0.3, atol=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            integral_comparison((0.3, 0.3), GeneratorConfig(3, 1, 5))

    def test_profile(self):
        prof = alternatives_choquet_profile(table1(), GeneratorConfig(5, 3, 100))
        assert prof.values.shape == (100, 7)
        assert np.all((prof.medians >= 0) & (prof.medians <= 1))

    def test_binary_profile(self):
        x = np.array([[1.0, 0.0, 1.0]])
        cfg = GeneratorConfig(3, 4, 10)
        prof = alternatives_choquet_profile(x, cfg)
        np.testing.assert_allclose(prof.values[:, 0], [m[[1, 3]] for m in random_batch(cfg)], atol=1e-15)
        assert prof.values[0, 0] == pytest.approx(choquet(random_batch(cfg)[0], x[0]))
