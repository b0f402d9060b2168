import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dominantset._validation import check_simplex, support
from dominantset.game import expected_payoffs, mean_payoff, relative_fitness, shift_payoffs

from conftest import HAWK_DOVE, triangle


def test_expected_payoffs_examples():
    np.testing.assert_array_equal(expected_payoffs(np.zeros((2, 2)), [0.5, 0.5]), [0, 0])
    np.testing.assert_array_equal(expected_payoffs(np.eye(2), [0.8, 0.2]), [0.8, 0.2])
    np.testing.assert_allclose(expected_payoffs(HAWK_DOVE, [0.5, 0.5]), [0.5, 0.5], atol=1e-15)


def test_mean_payoff_examples():
    for n in range(1, 6):
        assert mean_payoff(np.eye(n), np.full(n, 1 / n)) == pytest.approx(1 / n, abs=1e-15)
    assert mean_payoff(HAWK_DOVE, [0.5, 0.5]) == pytest.approx(0.5, abs=1e-15)
    x = np.full(3, 1 / 3)
    brute = sum(x[i] * x[j] for i in range(3) for j in range(3) if i != j)
    assert mean_payoff(triangle(), x) == pytest.approx(brute, abs=1e-15)
    assert brute == pytest.approx(2 / 3, abs=1e-15)


def test_shift_examples():
    np.testing.assert_array_equal(shift_payoffs(np.zeros((2, 2)), 1), np.ones((2, 2)))
    np.testing.assert_array_equal(shift_payoffs(HAWK_DOVE, 1), [[0, 3], [1, 2]])
    np.testing.assert_array_equal(shift_payoffs(HAWK_DOVE, 0), HAWK_DOVE)


@pytest.mark.parametrize("bad", [np.ones((2, 3)), [[np.nan, 0], [0, 0]], [[np.inf]]])
def test_rejects_bad_matrices(bad):
    with pytest.raises(ValueError):
        expected_payoffs(bad, [1.0] * np.shape(bad)[1])


def test_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        mean_payoff(np.eye(3), [0.5, 0.5])


def test_shift_rejects_nonfinite():
    with pytest.raises(ValueError):
        shift_payoffs(np.eye(2), np.nan)


def test_simplex_construction():
    np.testing.assert_array_equal(check_simplex([1.0, -1e-13]), [1.0, 0.0])
    x = check_simplex([0.5, 0.5 + 5e-10])
    assert abs(x.sum() - 1) <= 1e-12
    with pytest.raises(ValueError):
        check_simplex([0.5, 0.6])
    with pytest.raises(ValueError):
        check_simplex([1.1, -0.1])
    with pytest.raises(ValueError):
        check_simplex([])


def test_support_is_scale_aware():
    n = 1000
    x = np.full(n, 0.5 / (n - 1))
    x[0] = 0.5
    x[1] -= 1e-8
    x[2] = 5e-8  # 5e-8 < 1e-4 / n = 1e-7
    x /= x.sum()
    s = support(x)
    assert 0 in s and 2 not in s


matrices = st.integers(1, 6).flatmap(
    lambda n: st.tuples(
        arrays(np.float64, (n, n), elements=st.floats(-10, 10)),
        arrays(np.float64, (n, n), elements=st.floats(-10, 10)),
        arrays(np.float64, n, elements=st.floats(0.01, 1)),
        st.floats(-50, 50),
    ))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_payoff_identities(case):
    A, B, w, c = case
    x = w / w.sum()
    p = expected_payoffs(A, x)
    m = mean_payoff(A, x)
    assert abs(m - x @ p) <= 1e-12 * max(1.0, abs(m))
    np.testing.assert_allclose(expected_payoffs(A + B, x), p + expected_payoffs(B, x),
                               rtol=0, atol=1e-12)
    As = shift_payoffs(A, c)
    np.testing.assert_allclose(expected_payoffs(As, x), p + c, rtol=0, atol=1e-12)
    assert mean_payoff(As, x) == pytest.approx(m + c, abs=1e-12)
    np.testing.assert_allclose(relative_fitness(As, x), relative_fitness(A, x), atol=1e-12)
