import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmgraph.exceptions import AmbiguityError, InfeasibleConstructionError
from fmgraph.families import (
    additivity_order,
    depends_only_on_counts,
    encode_partition,
    family_report,
    indifference_partition,
    intolerant_order,
    is_k_additive,
    is_k_interactive,
    is_k_intolerant,
    is_k_maxitive,
    is_k_minitive,
    is_k_tolerant,
    make_k_interactive,
    maxitive_order,
    minitive_order,
    tolerant_order,
)
from fmgraph.lattice import (
    FuzzyMeasure,
    additive_from_weights,
    cardinalities,
    covering_edges,
    dual,
    mask_of,
    max_measure,
    min_measure,
    uniform_additive,
)
from fmgraph.sampling import GeneratorConfig, random_measure
from fmgraph.transforms import zeta

from conftest import measures_strategy


def brute_maxitive(mu, k, tol=1e-12):
    v = mu.values
    for a in range(len(v)):
        if bin(a).count("1") >= k + 1:
            best = max(v[b] for b in range(len(v)) if b & a == b and b != a)
            if abs(v[a] - best) > tol:
                return False
    return True


def brute_minitive(mu, k, tol=1e-12):
    v = mu.values
    n = mu.n
    for a in range(len(v)):
        if bin(a).count("1") <= n - k - 1:
            best = min(v[b] for b in range(len(v)) if b & a == a and b != a)
            if abs(v[a] - best) > tol:
                return False
    return True


def maxitive_instance(n, k, seed):
    """Random measure on levels <= k, extended upward by max over subsets."""
    vals = random_measure(GeneratorConfig(n, seed)).values.copy()
    card = cardinalities(n)
    # some k-subset reaches 1 so that the max extension ends at mu(N) = 1
    b = (1 << k) - 1
    for a in range(1 << n):
        if a & b == b:
            vals[a] = 1.0
    for a in sorted(range(1 << n), key=lambda m: card[m]):
        if card[a] >= k + 1:
            vals[a] = max(vals[c] for c in range(1 << n) if c & a == c and c != a)
    return FuzzyMeasure(vals)


class TestAdditivity:
    def test_examples(self):
        assert additivity_order(additive_from_weights((0.1, 0.2, 0.3, 0.4))) == 1
        assert additivity_order(FuzzyMeasure([0, 0.3, 0.5, 1])) == 2
        m = np.zeros(8)
        m[[1, 2, 4]] = 0.3
        m[3] = 0.1
        assert additivity_order(zeta(m)) == 2
        assert is_k_additive(zeta(m), 2)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_order_of_zeta(self, n):
        rng = np.random.default_rng(n)
        card = cardinalities(n)
        for top in range(1, n + 1):
            m = np.zeros(1 << n)
            m[card == 1] = rng.random(n)
            m[(card >= 2) & (card <= top)] = rng.random(int(((card >= 2) & (card <= top)).sum())) * 0.01
            m /= m.sum()
            assert additivity_order(zeta(m)) == top


class TestTolerance:
    def test_examples(self):
        assert is_k_tolerant(max_measure(4), 1)
        assert is_k_intolerant(min_measure(4), 1)
        assert not any(is_k_tolerant(uniform_additive(4), k) for k in range(1, 4))
        assert tolerant_order(max_measure(3)) == 1
        assert intolerant_order(min_measure(3)) == 1

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            is_k_tolerant(max_measure(3), 0)

    def test_interactive_k_one_is_tolerant(self):
        mu = make_k_interactive(uniform_additive(5).values * 0.5, 2, 1.0)
        assert is_k_tolerant(mu, 3)
        assert tolerant_order(mu) == 3

    @pytest.mark.parametrize("n,k", [(3, 1), (4, 2), (5, 2), (5, 3)])
    def test_tolerant_is_maxitive(self, n, k):
        # k-tolerant measures reach 1 at level k, so they are (k)-maxitive
        mu = maxitive_instance(n, k, 3)
        vals = mu.values.copy()
        card = cardinalities(n)
        vals[card >= k] = 1.0
        vals[card < k] = np.minimum(vals[card < k], 0.9)
        tolerant = FuzzyMeasure(vals)
        assert is_k_tolerant(tolerant, k)
        assert is_k_maxitive(tolerant, k)
        assert is_k_minitive(dual(tolerant), k)


class TestMaxitive:
    def test_example_n3(self):
        mu = FuzzyMeasure.from_subsets(3, {1: 0.2, 2: 0.5, 4: 0.5, 3: 0.6, 5: 0.7, 6: 1.0})
        assert is_k_maxitive(mu, 2)
        assert maxitive_order(mu) == 2

    def test_max_measure(self):
        assert is_k_maxitive(max_measure(4), 1)
        assert maxitive_order(max_measure(4)) == 1
        assert is_k_minitive(min_measure(4), 1)

    def test_none_below_n(self):
        mu = uniform_additive(3)
        assert maxitive_order(mu) == 3
        assert minitive_order(mu) == 3

    @pytest.mark.parametrize("n,k", [(3, 1), (4, 1), (4, 2), (5, 2), (5, 3)])
    def test_dual_of_maxitive_is_minitive(self, n, k):
        for seed in range(10):
            mu = maxitive_instance(n, k, seed)
            assert is_k_maxitive(mu, k) and brute_maxitive(mu, k)
            assert is_k_minitive(dual(mu), k) and brute_minitive(dual(mu), k)

    @given(measures_strategy(2, 5), st.data())
    @settings(max_examples=40, deadline=None)
    def test_agrees_with_brute_force(self, mu, data):
        k = data.draw(st.integers(1, mu.n - 1))
        assert is_k_maxitive(mu, k, 1e-12) == brute_maxitive(mu, k)
        assert is_k_minitive(mu, k, 1e-12) == brute_minitive(mu, k)


class TestInteractive:
    def test_levels_exact(self):
        mu = make_k_interactive(uniform_additive(5).values * 0.5, 2, 0.8)
        card = cardinalities(5)
        assert set(mu.values[card == 3]) == {0.8}
        assert set(mu.values[card == 4]) == {0.9}
        assert mu.values[-1] == 1.0
        assert is_k_interactive(mu, 2) == 0.8

    def test_marginals_above_k(self):
        mu = make_k_interactive(uniform_additive(5).values * 0.5, 2, 0.8)
        lower, upper, _ = covering_edges(5)
        card = cardinalities(5)
        sel = card[lower] >= 3
        heights = mu.values[upper[sel]] - mu.values[lower[sel]]
        assert set(heights.tolist()) == {(1 - 0.8) / 2}

    def test_k_equal_n_minus_2(self):
        mu = make_k_interactive(uniform_additive(4).values * 0.5, 2, 0.7)
        assert set(mu.values[cardinalities(4) == 3]) == {0.7}

    def test_uniform_additive(self):
        n = 5
        for k in range(0, n - 1):
            assert is_k_interactive(uniform_additive(n), k) == pytest.approx((k + 1) / n)

    def test_random_not_interactive(self):
        mu = random_measure(GeneratorConfig(5, 11))
        assert all(is_k_interactive(mu, k) is None for k in range(0, 3))

    def test_infeasible(self):
        with pytest.raises(InfeasibleConstructionError):
            make_k_interactive(uniform_additive(5).values, 2, 0.3)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            make_k_interactive(uniform_additive(4).values, 3, 0.5)
        with pytest.raises(ValueError):
            make_k_interactive(uniform_additive(4).values, 1, 1.5)

    @given(st.integers(0, 2**31), st.integers(3, 6), st.floats(0.0, 1.0), st.data())
    @settings(max_examples=40, deadline=None)
    def test_roundtrip(self, seed, n, K, data):
        k = data.draw(st.integers(0, n - 2))
        lower = random_measure(GeneratorConfig(n, seed)).values * K
        mu = make_k_interactive(lower, k, K)
        assert is_k_interactive(mu, k) == pytest.approx(K, abs=1e-12)


def p_symmetric(blocks, n, seed=0):
    """Monotone measure depending only on block counts."""
    enc = encode_partition(blocks, n)
    rng = np.random.default_rng(seed)
    keys = sorted(set(map(tuple, enc.vectors.tolist())), key=sum)
    base = {k: 0.0 for k in keys}
    # additive in distinct per-block weights plus a symmetric bonus: monotone, count-based
    w = rng.random(len(blocks)) + 0.5
    vals = np.array([float(np.dot(w, vec)) for vec in enc.vectors])
    vals = vals / vals[-1]
    card = cardinalities(n)
    vals = vals * 0.7 + 0.3 * (card / n) ** 2
    return FuzzyMeasure(vals), enc


class TestPartition:
    def test_symmetric_one_block(self):
        enc = indifference_partition(uniform_additive(4))
        assert enc.blocks == (15,) and enc.p == 1

    def test_distinct_weights(self):
        enc = indifference_partition(additive_from_weights((0.1, 0.2, 0.3, 0.4)))
        assert enc.blocks == (1, 2, 4, 8)

    def test_three_block_recovery(self):
        blocks = (mask_of([1, 2]), mask_of([3, 4]), mask_of([5]))
        mu, enc = p_symmetric(blocks, 5)
        got = indifference_partition(mu)
        assert got.blocks == blocks
        assert depends_only_on_counts(mu, got)
        assert got.coefficient_count == 3 * 3 * 2
        assert len({tuple(r) for r in got.vectors.tolist()}) == got.coefficient_count

    def test_ambiguity(self):
        mu = additive_from_weights((0.2, 0.206, 0.212, 0.382))
        with pytest.raises(AmbiguityError) as info:
            indifference_partition(mu, tol=0.01)
        assert sorted(info.value.triple) == [1, 2, 3]

    def test_encode_rejects_bad_blocks(self):
        with pytest.raises(ValueError):
            encode_partition((3, 6), 3)
        with pytest.raises(ValueError):
            encode_partition((1, 2), 3)

    @given(measures_strategy(2, 5))
    @settings(max_examples=30, deadline=None)
    def test_recovered_partition_is_valid(self, mu):
        enc = indifference_partition(mu)
        assert depends_only_on_counts(mu, enc)
        # no two blocks could be merged
        for b1, b2 in itertools.combinations(enc.blocks, 2):
            assert not depends_only_on_counts(mu, encode_partition(
                [b for b in enc.blocks if b not in (b1, b2)] + [b1 | b2], mu.n))


class TestReport:
    def test_fields(self):
        rep = family_report(make_k_interactive(uniform_additive(5).values * 0.5, 2, 0.8))
        assert rep.interactive[0] <= 2
        assert rep.symmetry_p == 1
        assert 1 <= rep.additivity_order <= 5
