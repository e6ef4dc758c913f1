import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from schurmult.core import ExponentPair, InconsistencyError, lp_norm
from schurmult.opnorm import (SearchConfig, opnorm, opnorm_exact, opnorm_hull_upper,
                              opnorm_interp_upper, opnorm_oracle, opnorm_power_lower,
                              power_iteration)

CFG = SearchConfig()


def test_closed_forms():
    a = np.array([[1.0, 2.0], [0.0, 1.0]])
    assert math.isclose(opnorm_exact(a, (1, 2)), math.sqrt(5))
    assert math.isclose(opnorm_exact([[1.0, 1.0], [1.0, -1.0]], (2, 2)), math.sqrt(2))
    # q = inf: largest row norm in the conjugate exponent 3/2
    assert math.isclose(opnorm_exact(a, (3, "inf")), (1 + 2 ** 1.5) ** (2 / 3))
    # diagonal: ||diag(d)||_{p->q} = ||d||_r with 1/r = 1/q - 1/p
    assert math.isclose(opnorm_exact(np.eye(2), (2, 1)), math.sqrt(2))
    assert opnorm_exact(np.random.default_rng(0).standard_normal((20, 20)), (3, 2)) is None


def test_sign_enumeration_endpoint():
    a = np.array([[1.0, 2.0], [3.0, -4.0]])
    # p = inf, q = 1: max over sign vectors of ||A s||_1
    best = max(lp_norm(a @ np.array(s), 1) for s in [(1, 1), (1, -1)])
    assert math.isclose(opnorm_exact(a, ("inf", 1)), best)


def test_power_matches_oracle_example():
    a = np.random.default_rng(3).standard_normal((3, 3))
    est = opnorm_power_lower(a, (3, 2), CFG)
    orc = opnorm_oracle(a, (3, 2), CFG)
    assert abs(est.lower - orc) <= 1e-3


def test_power_iteration_monotone():
    a = np.random.default_rng(1).standard_normal((5, 4))
    _, _, hist = power_iteration(a, (4, 1.5), np.ones(4))
    assert np.all(np.diff(hist) >= -1e-12)


def test_interp_upper():
    # column sums 2, row sums 3: the (1,1)-(inf,inf) midpoint gives sqrt(6)
    a = np.array([[1.0, 2.0], [1.0, 0.0]])
    assert math.isclose(opnorm_interp_upper(a, (2, 2)), math.sqrt(6))
    assert opnorm_interp_upper(np.eye(3), (1.7, 1.7)) == pytest.approx(1.0)
    assert opnorm_interp_upper(a, (3, 2)) is None


def test_hull_upper_is_sound_and_tight():
    a = np.random.default_rng(2).standard_normal((3, 3))
    up = opnorm_hull_upper(a, (3, 2))
    lo = opnorm_power_lower(a, (3, 2), CFG).lower
    assert lo <= up <= lo * (1 + 1e-5)


def test_combined_estimate():
    est = opnorm([[1.0, 2.0], [0.0, 1.0]], (1, 2), CFG)
    assert math.isclose(est.lower, math.sqrt(5)) and math.isclose(est.upper, math.sqrt(5))
    assert "exact" in est.methods


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(restarts=0)


small = st.integers(1, 4)


@settings(max_examples=25, deadline=None)
@given(small, small, st.integers(0, 10_000),
       st.sampled_from([(2, 2), (3, 2), (4, 1.5), ("inf", 2), (1.5, 1.5)]))
def test_lower_never_exceeds_upper(m, n, seed, pq):
    a = np.random.default_rng(seed).standard_normal((m, n))
    est = opnorm(a, pq, SearchConfig(restarts=4))
    assert est.lower <= est.upper * (1 + 1e-9)
    if est.witness is not None:
        pq = ExponentPair(*pq)
        assert math.isclose(lp_norm(est.witness, pq.p), 1.0, rel_tol=1e-9)


def test_homogeneity():
    a = np.random.default_rng(4).standard_normal((3, 3))
    e1 = opnorm_power_lower(a, (3, 2), CFG).lower
    e2 = opnorm_power_lower(-2.5 * a, (3, 2), CFG).lower
    assert math.isclose(e2, 2.5 * e1, rel_tol=1e-9)


def test_inconsistency_error_type():
    assert issubclass(InconsistencyError, RuntimeError)
