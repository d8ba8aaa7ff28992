import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings

from fmgraph.exceptions import CapacityError, ValidationError
from fmgraph.lattice import (
    FuzzyMeasure,
    SetFunction,
    additive_from_weights,
    cardinalities,
    covering_edges,
    dual,
    edge_heights,
    is_additive,
    is_subadditive,
    is_submodular,
    is_superadditive,
    is_supermodular,
    is_symmetric,
    marginal,
    mask_of,
    max_measure,
    maximal_chains,
    members,
    min_measure,
    subset_label,
    uniform_additive,
    validate,
)

from conftest import measures_strategy


class TestBitmasks:
    def test_mask_roundtrip(self):
        assert mask_of([1, 3]) == 5
        assert members(5) == (1, 3)
        assert mask_of([]) == 0

    def test_labels(self):
        assert subset_label(5) == "{1,3}"
        assert subset_label(5, "figure") == "c(1, 3)"
        assert subset_label(2, "figure") == "2"
        assert subset_label(0, "figure") == "Empty set"
        with pytest.raises(ValueError):
            subset_label(1, "bogus")

    def test_mask_rejects_bad_criterion(self):
        with pytest.raises(ValueError):
            mask_of([0])

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_edge_count(self, n):
        lower, upper, crit = covering_edges(n)
        assert lower.size == n * 2 ** (n - 1)
        touches = np.bincount(np.r_[lower, upper], minlength=1 << n)
        assert np.all(touches == n)
        np.testing.assert_array_equal(upper, lower | (1 << (crit - 1)))
        np.testing.assert_array_equal(lower & (1 << (crit - 1)), 0)

    def test_cardinalities(self):
        np.testing.assert_array_equal(cardinalities(3), [0, 1, 1, 2, 1, 2, 2, 3])


class TestSetFunction:
    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            SetFunction([0, 1, 2])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            SetFunction([0, np.nan, 0.5, 1])

    def test_universe_limits(self):
        with pytest.raises(CapacityError):
            SetFunction([0, 1])
        with pytest.raises(CapacityError):
            SetFunction(np.zeros(1 << 13))

    def test_read_only(self):
        mu = uniform_additive(3)
        with pytest.raises(ValueError):
            mu.values[1] = 0.9

    def test_indexing(self):
        mu = additive_from_weights((0.1, 0.2, 0.3, 0.4))
        assert mu[[1, 4]] == pytest.approx(0.5)
        assert mu[9] == pytest.approx(0.5)
        with pytest.raises(IndexError):
            mu[16]


class TestValidation:
    def test_min_measure_ok(self):
        assert validate(min_measure(4)).ok

    def test_monotone_n2_ok(self):
        assert validate(SetFunction([0, 0.5, 0.2, 1])).ok

    def test_edge_violation(self):
        rep = validate(SetFunction([0, 0.5, 0.2, 0.4]))
        assert not rep.ok
        assert (1, 2, pytest.approx(0.1)) in [(a, i, d) for a, i, d in rep.edge_violations]
        assert rep.boundary_violations == [(3, 0.4, 1.0)]
        assert "decreases" in rep.describe()

    def test_negative_tolerance(self):
        with pytest.raises(ValueError):
            validate(min_measure(2), -1.0)

    def test_constructor_raises_with_report(self):
        with pytest.raises(ValidationError) as info:
            FuzzyMeasure([0, 0.5, 0.2, 0.4])
        assert info.value.report is not None

    def test_boundary_snapping(self):
        mu = FuzzyMeasure([1e-12, 0.4, 0.5, 1 - 1e-12])
        assert mu.values[0] == 0.0 and mu.values[-1] == 1.0

    def test_within_tolerance_accepted(self):
        assert validate(SetFunction([0, 0.5, 0.5 - 1e-10, 1])).ok

    def test_from_subsets(self):
        mu = FuzzyMeasure.from_subsets(3, {(1,): 0.2, (1, 2): 0.5, 2: 0.1, (1, 3): 0.2, (2, 3): 0.1})
        assert mu[[1, 2]] == 0.5 and mu[[2]] == 0.1 and mu[[3]] == 0.0
        with pytest.raises(ValidationError):
            FuzzyMeasure.from_subsets(3, {(1,): 0.2})


class TestDual:
    def test_n2_example(self):
        d = dual(FuzzyMeasure([0, 0.3, 0.5, 1]))
        np.testing.assert_allclose(d.values, [0, 0.5, 0.7, 1], atol=1e-15)

    def test_additive_self_dual(self):
        mu = additive_from_weights((0.1, 0.2, 0.3, 0.4))
        np.testing.assert_allclose(dual(mu).values, mu.values, atol=1e-15)

    @given(measures_strategy())
    @settings(max_examples=100, deadline=None)
    def test_involution(self, mu):
        np.testing.assert_allclose(dual(dual(mu)).values, mu.values, atol=1e-12)

    def test_rejects_invalid(self):
        with pytest.raises(ValidationError):
            dual(SetFunction([0, 0.5, 0.2, 0.4]))


class TestMarginal:
    def test_min_measure(self):
        mu = min_measure(4)
        assert marginal(mu, [1, 2, 3], 4) == 1.0
        assert marginal(mu, [1], 4) == 0.0

    def test_additive(self):
        w = (0.1, 0.2, 0.3, 0.4)
        mu = additive_from_weights(w)
        for a in range(16):
            for i in range(1, 5):
                if not a >> (i - 1) & 1:
                    assert marginal(mu, a, i) == pytest.approx(w[i - 1])

    def test_member_rejected(self):
        with pytest.raises(ValueError):
            marginal(min_measure(3), [1, 2], 2)


class TestPredicates:
    def test_symmetric(self):
        assert is_symmetric(uniform_additive(4))
        assert not is_symmetric(additive_from_weights((0.1, 0.2, 0.3, 0.4)))
        assert is_symmetric(min_measure(4))

    def test_additivity_family(self):
        mu = FuzzyMeasure([0, 0.3, 0.5, 1])
        assert is_additive(additive_from_weights((0.1, 0.2, 0.3, 0.4)))
        assert is_superadditive(mu) and not is_subadditive(mu)
        assert is_subadditive(dual(mu)) and not is_superadditive(dual(mu))

    def test_modularity_family(self):
        mu = FuzzyMeasure([0, 0.3, 0.5, 1])
        assert is_supermodular(mu) and not is_submodular(mu)
        assert is_submodular(dual(mu))
        add = additive_from_weights((0.1, 0.2, 0.3, 0.4))
        assert is_supermodular(add) and is_submodular(add)


class TestConstructors:
    def test_values(self):
        assert uniform_additive(4)[[1, 2]] == 0.5
        assert max_measure(3)[[2]] == 1.0
        assert additive_from_weights((0.1, 0.2, 0.3, 0.4))[[1, 4]] == pytest.approx(0.5)

    def test_bad_weights(self):
        with pytest.raises(ValueError):
            additive_from_weights((0.5, 0.6))
        with pytest.raises(ValueError):
            additive_from_weights((1.5, -0.5))


class TestChains:
    def test_counts(self):
        assert len(list(maximal_chains(2))) == 2
        chains = list(maximal_chains(4))
        assert len(chains) == 24 and len(set(chains)) == 24
        assert all(len(c) == 5 and c[0] == 0 and c[-1] == 15 for c in chains)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            next(maximal_chains(9))

    @given(measures_strategy(2, 5))
    @settings(max_examples=50, deadline=None)
    def test_chain_sum(self, mu):
        for chain in maximal_chains(mu.n):
            assert math.fsum(mu.values[b] - mu.values[a] for a, b in zip(chain, chain[1:])) == pytest.approx(1.0, abs=1e-12)

    @given(measures_strategy(2, 5))
    @settings(max_examples=50, deadline=None)
    def test_edge_heights_nonnegative(self, mu):
        assert np.all(edge_heights(mu) >= 0)


def brute_force_modularity(mu):
    """Def.-style check over all (A, B) pairs: returns (supermodular, submodular)."""
    v = mu.values
    size = len(v)
    sup = sub = True
    for a, b in itertools.product(range(size), repeat=2):
        gap = v[a | b] + v[a & b] - v[a] - v[b]
        sup &= gap >= -1e-12
        sub &= gap <= 1e-12
    return sup, sub


class TestModularityBruteForce:
    @given(measures_strategy(2, 4))
    @settings(max_examples=60, deadline=None)
    def test_random_agrees(self, mu):
        assert (is_supermodular(mu, 1e-12), is_submodular(mu, 1e-12)) == brute_force_modularity(mu)

    @pytest.mark.parametrize("n", [3, 4])
    def test_structured_agrees(self, n):
        for mu in (min_measure(n), max_measure(n), uniform_additive(n)):
            assert (is_supermodular(mu, 1e-12), is_submodular(mu, 1e-12)) == brute_force_modularity(mu)
