import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schurmult.core import (INF, Exponent, ExponentPair, RegimeError, as_exponent, as_matrix,
                            conjugate, hadamard, holder_extremizer, lp_norm, signed_power)

exponents = st.one_of(st.just("inf"), st.floats(1.0, 20.0))
vectors = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=8)


def test_conjugate_endpoints():
    assert conjugate(1).is_inf
    assert conjugate("inf") == Exponent(1.0)
    assert conjugate(2).value == 2.0
    assert math.isclose(conjugate(3).value, 1.5)


def test_infinity_is_distinct_state():
    assert as_exponent(float("inf")) is INF
    assert as_exponent("inf").reciprocal == 0.0
    with pytest.raises(ValueError):
        Exponent(math.inf)
    with pytest.raises(ValueError):
        as_exponent(0.5)


def test_regime():
    assert ExponentPair(3, 2).regime
    assert ExponentPair("inf", 1).regime
    assert not ExponentPair(2, 3).regime
    with pytest.raises(RegimeError, match="q <= p"):
        ExponentPair(1, 2).require_regime()


@given(exponents)
def test_conjugate_is_involution(e):
    e = as_exponent(e)
    back = conjugate(conjugate(e))
    if e.is_inf:
        assert back.is_inf
    else:
        assert math.isclose(back.value, e.value, rel_tol=1e-12)


def test_lp_norm_values():
    x = [3.0, -4.0]
    assert lp_norm(x, 1) == 7.0
    assert lp_norm(x, 2) == 5.0
    assert lp_norm(x, "inf") == 4.0
    assert math.isclose(lp_norm(x, 3), (27 + 64) ** (1 / 3))


def test_lp_norm_no_overflow():
    assert math.isclose(lp_norm([1e200, 1e200], 4), 1e200 * 2 ** 0.25, rel_tol=1e-12)


@settings(max_examples=200, deadline=None)
@given(vectors, exponents)
def test_holder_extremizer_attains(x, e):
    x = np.array(x)
    e = as_exponent(e)
    xs = holder_extremizer(x, e)
    if not np.any(x):
        assert not np.any(xs)
        return
    assert math.isclose(lp_norm(xs, conjugate(e)), 1.0, rel_tol=1e-9)
    assert math.isclose(float(xs @ x), lp_norm(x, e), rel_tol=1e-9, abs_tol=1e-9)


def test_holder_extremizer_examples():
    np.testing.assert_allclose(holder_extremizer([3.0, -4.0], 2), [0.6, -0.8])
    np.testing.assert_array_equal(holder_extremizer([1.0, -3.0, 3.0], "inf"), [0, -1, 0])
    np.testing.assert_array_equal(holder_extremizer([2.0, 0.0, -1.0], 1), [1, 0, -1])


def test_signed_power():
    np.testing.assert_allclose(signed_power([-2.0, 3.0], 3), [-4.0, 9.0])


def test_hadamard_and_matrix_validation():
    np.testing.assert_array_equal(hadamard([[1, 2]], [[3, 4]]), [[3, 8]])
    with pytest.raises(ValueError, match="incompatible"):
        hadamard(np.ones((2, 2)), np.ones((2, 3)))
    with pytest.raises(ValueError):
        as_matrix([[np.nan]])
    assert as_matrix([1.0, 2.0]).shape == (1, 2)
