import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fmgraph.integrals import (
    BASIS_INTEGRALS,
    INTEGRALS,
    choquet,
    choquet_basis,
    choquet_coefficients,
    pan,
    pan_basis,
    sugeno,
    sugeno_basis,
)
from fmgraph.lattice import additive_from_weights, max_measure, min_measure, uniform_additive

from conftest import measures_strategy

X4 = (0.2, 0.5, 0.75, 1.0)


def unit_vectors(n):
    return st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n).map(np.array)


@st.composite
def measure_and_x(draw, n_min=2, n_max=6):
    mu = draw(measures_strategy(n_min, n_max))
    x = draw(unit_vectors(mu.n))
    return mu, x


class TestExamples:
    def test_uniform_additive(self):
        mu = uniform_additive(4)
        assert choquet(mu, X4) == pytest.approx(0.6125, abs=1e-15)
        assert sugeno(mu, X4) == 0.5
        assert pan(mu, X4) == 0.375

    @pytest.mark.parametrize("name", ["choquet", "sugeno", "pan"])
    def test_extreme_measures(self, name):
        f = INTEGRALS[name]
        assert f(min_measure(4), X4) == 0.2
        assert f(max_measure(4), X4) == 1.0

    def test_additive_weighted_sum(self):
        w = (0.1, 0.2, 0.3, 0.4)
        assert choquet(additive_from_weights(w), X4) == pytest.approx(np.dot(w, X4), abs=1e-15)

    def test_choquet_unbounded_inputs(self):
        assert choquet(uniform_additive(2), (2.0, 4.0)) == pytest.approx(3.0)

    def test_range_errors(self):
        mu = uniform_additive(3)
        with pytest.raises(ValueError):
            choquet(mu, (-0.1, 0.2, 0.3))
        with pytest.raises(ValueError):
            sugeno(mu, (1.1, 0.2, 0.3))
        with pytest.raises(ValueError):
            pan(mu, (0.1, 0.2))


class TestBasisForms:
    @given(measure_and_x())
    @settings(max_examples=200, deadline=None)
    def test_agree(self, pair):
        mu, x = pair
        assert abs(choquet(mu, x) - choquet_basis(mu, x)) <= 1e-9
        assert abs(sugeno(mu, x) - sugeno_basis(mu, x)) <= 1e-12
        assert abs(pan(mu, x) - pan_basis(mu, x)) <= 1e-12

    @given(measure_and_x())
    @settings(max_examples=100, deadline=None)
    def test_coefficients(self, pair):
        mu, x = pair
        w = choquet_coefficients(x, mu.n)
        assert float(w @ mu.values) == pytest.approx(choquet(mu, x), abs=1e-12)


class TestProperties:
    @given(measure_and_x())
    @settings(max_examples=200, deadline=None)
    def test_pan_below_sugeno_and_internal(self, pair):
        mu, x = pair
        assert pan(mu, x) <= sugeno(mu, x)
        lo, hi = x.min(), x.max()
        for f in INTEGRALS.values():
            assert lo - 1e-12 <= f(mu, x) <= hi + 1e-12

    @given(measures_strategy(2, 6), st.floats(0.0, 1.0))
    @settings(max_examples=50, deadline=None)
    def test_idempotent(self, mu, c):
        x = np.full(mu.n, c)
        assert choquet(mu, x) == pytest.approx(c, abs=1e-12)
        assert sugeno(mu, x) == c and pan(mu, x) == c

    @given(measure_and_x(), st.data())
    @settings(max_examples=100, deadline=None)
    def test_monotone_in_x(self, pair, data):
        mu, x = pair
        y = np.minimum(1.0, x + np.array(data.draw(st.lists(st.floats(0, 1), min_size=mu.n, max_size=mu.n))))
        for f in INTEGRALS.values():
            assert f(mu, x) <= f(mu, y) + 1e-12

    @given(measures_strategy(3, 6), st.data())
    @settings(max_examples=60, deadline=None)
    def test_tie_invariance(self, mu, data):
        vals = data.draw(st.lists(st.sampled_from([0.1, 0.4, 0.4, 0.9]), min_size=mu.n, max_size=mu.n))
        x = np.array(vals)
        perm = np.array(data.draw(st.permutations(range(mu.n))))
        ties = np.array([np.flatnonzero(x == v) for v in x], dtype=object)
        # permute only among tied coordinates: x is unchanged but the sort order may differ
        y = x.copy()
        for idx in {tuple(t) for t in ties}:
            idx = list(idx)
            y[idx] = x[[i for i in perm if i in idx]]
        np.testing.assert_array_equal(x, y)
        for name in INTEGRALS:
            assert INTEGRALS[name](mu, x) == pytest.approx(BASIS_INTEGRALS[name](mu, y), abs=1e-12)
