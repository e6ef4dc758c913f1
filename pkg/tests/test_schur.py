import math

import numpy as np
import pytest

from schurmult.core import RegimeError, hadamard
from schurmult.opnorm import SearchConfig
from schurmult.oracles import dominated_norm_grid, lpq_grid, multiplier_norm_2x2
from schurmult.schur import (FactorizationCertificate, FactorizationError, certificate_upper,
                             certificate_value, compose_certificates, dominated_norm,
                             duality_report, factorization_solve, lpq_lower,
                             multiplier_norm_lower)

CFG = SearchConfig()

# p = q = 2 norm of the 2x2 triangle mask from the exhaustive grid oracle
TRIANGLE2_ORACLE = 1.1547005378558157


def test_regime_error():
    with pytest.raises(RegimeError, match="q <= p"):
        multiplier_norm_lower(np.ones((2, 2)), (2, 3), CFG)


def test_constant_multiplier():
    est = multiplier_norm_lower(np.full((3, 2), 2.0), (3, 2), CFG)
    assert est.lower == pytest.approx(2.0, abs=1e-9)


def test_rank_one_example():
    m = np.outer([2.0, 1.0], [1.0, 3.0])
    assert multiplier_norm_lower(m, (3, 2), CFG).lower == pytest.approx(6.0, rel=1e-2)
    assert multiplier_norm_2x2(m, (3, 2)) == pytest.approx(6.0, rel=1e-3)


def test_triangle_2x2_against_oracle():
    est = multiplier_norm_lower(np.triu(np.ones((2, 2))), (2, 2), CFG)
    assert est.lower == pytest.approx(TRIANGLE2_ORACLE, abs=1e-6)
    assert "heuristic" not in est.methods


def test_identity_factorization():
    cert = factorization_solve(np.eye(2), (2, 2), atoms=2, cfg=CFG)
    assert cert.residual <= 1e-8
    assert certificate_value(cert, (2, 2)) <= 1 + 1e-3


def test_one_atom_constant_certificate():
    c = -2.5
    cert = FactorizationCertificate(np.array([1.0]), np.full((1, 3), c), np.ones((1, 2)), 0.0)
    assert cert.recompute_residual(np.full((2, 3), c)) == 0.0
    assert certificate_value(cert, (3, 2)) == pytest.approx(2.5)
    scaled = FactorizationCertificate(cert.atom_weights, 2 * cert.x_vectors, cert.y_vectors, 0.0)
    assert certificate_value(scaled, (3, 2)) == pytest.approx(5.0)


def test_factorization_sandwich_3x3():
    m = np.random.default_rng(11).standard_normal((3, 3))
    cert = factorization_solve(m, (4, 2), atoms=6, cfg=CFG)
    assert cert.residual <= 1e-8
    lower = multiplier_norm_lower(m, (4, 2), CFG).lower
    assert certificate_upper(cert, (4, 2)) >= lower - 1e-6


def test_too_few_atoms():
    with pytest.raises(FactorizationError):
        factorization_solve(np.eye(3), (2, 2), atoms=2, cfg=CFG)


def test_composed_certificates_bound_product():
    rng = np.random.default_rng(5)
    m1, m2 = rng.standard_normal((2, 3)), rng.standard_normal((2, 3))
    c1 = factorization_solve(m1, (3, 2), cfg=CFG)
    c2 = factorization_solve(m2, (3, 2), cfg=CFG)
    c12 = compose_certificates(c1, c2)
    assert c12.recompute_residual(m1 * m2) <= 1e-7
    lower = multiplier_norm_lower(m1 * m2, (3, 2), CFG).lower
    assert lower <= certificate_upper(c1, (3, 2)) * certificate_upper(c2, (3, 2)) + 1e-6


def test_dominated_norm_examples():
    t = np.zeros((2, 2))
    t[0, 0] = 1.0
    val, sc, _ = dominated_norm(t, (2, 2), CFG)
    assert val == pytest.approx(1.0, abs=1e-6)
    assert sc.mu[0] > 0.99 and sc.nu[0] > 0.99
    np.testing.assert_allclose(sc.reconstruct((2, 2)), t, atol=1e-12)
    val3, _, _ = dominated_norm(-3.0 * t, (2, 2), CFG)
    assert val3 == pytest.approx(3.0, abs=1e-5)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_dominated_norm_grid_oracle(seed):
    t = np.random.default_rng(seed).standard_normal((2, 2))
    val, _, _ = dominated_norm(t, (2, 2), CFG)
    assert abs(val - dominated_norm_grid(t, (2, 2))) <= 1e-2


def test_lpq_examples():
    v = np.zeros((2, 3))
    v[1, 2] = -4.0
    assert lpq_lower(v, (2, 2), CFG).lower == pytest.approx(4.0)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_lpq_grid_oracle(seed):
    v = np.random.default_rng(seed).standard_normal((2, 2))
    lo = lpq_lower(v, (2, 2), CFG).lower
    assert lo <= lpq_grid(v, (2, 2)) + 1e-2
    assert lo >= lpq_grid(v, (2, 2)) - 1e-2


def test_duality_constant():
    rep = duality_report(np.ones((2, 3)), (3, 2), CFG)
    assert rep.lower == pytest.approx(1.0, abs=1e-6)
    assert rep.upper == pytest.approx(1.0, abs=1e-6)
    assert rep.gap <= 1e-6


def test_homogeneity():
    m = np.random.default_rng(9).standard_normal((2, 2))
    a = multiplier_norm_lower(m, (2, 2), CFG).lower
    b = multiplier_norm_lower(3.0 * m, (2, 2), CFG).lower
    assert b == pytest.approx(3.0 * a, rel=1e-9)


def test_witness_reproduces_lower():
    m = np.random.default_rng(12).standard_normal((3, 3))
    est = multiplier_norm_lower(m, (2, 2), CFG)
    a = est.witness
    ratio = np.linalg.norm(hadamard(m, a), 2) / np.linalg.norm(a, 2)
    assert ratio == pytest.approx(est.lower, rel=1e-9)
    assert math.isinf(est.upper)
