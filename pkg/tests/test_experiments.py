import numpy as np
import pytest

from schurmult.core import RegimeError
from schurmult.discretize import StepFunction, constant_kernel, product_kernel, uniform_partition
from schurmult.experiments import (explore_open_problem, hilbert_witness, run_inclusion_check,
                                   run_kernel_growth, run_triangle_growth, triangle_matrix)
from schurmult.opnorm import SearchConfig

CFG = SearchConfig(restarts=8)


def test_triangle_matrix():
    np.testing.assert_array_equal(triangle_matrix(1), [[1]])
    np.testing.assert_array_equal(triangle_matrix(2), [[1, 1], [0, 1]])
    assert triangle_matrix(3).sum() == 6


def test_hilbert_witness():
    np.testing.assert_array_equal(hilbert_witness(2), [[0, -1], [1, 0]])
    h = hilbert_witness(7)
    np.testing.assert_array_equal(h.T, -h)
    assert np.linalg.norm(hilbert_witness(64), 2) <= np.pi + 0.05


def test_triangle_regime_checks():
    with pytest.raises(RegimeError):
        run_triangle_growth([4], (1, 1), CFG)
    with pytest.raises(RegimeError):
        run_triangle_growth([4], ("inf", "inf"), CFG)
    with pytest.raises(RegimeError):
        run_triangle_growth([4], (2, 3), CFG)
    with pytest.raises(ValueError):
        run_triangle_growth([1, 4], (2, 2), CFG)


def test_triangle_small_monotone_and_ordered():
    rep = run_triangle_growth([8, 4, 16], (2, 2), CFG)
    assert rep.column("size") == [8, 4, 16]
    lows = dict(zip(rep.column("size"), rep.column("lower")))
    assert lows[4] <= lows[8] + 1e-6 <= lows[16] + 2e-6
    assert rep.fit is not None and rep.fit["slope"] > 0


def test_kernel_growth_constant_and_product():
    rep = run_kernel_growth(constant_kernel(1.0), 1.0, [2, 4, 8], (2, 2), CFG)
    np.testing.assert_allclose(rep.column("lower"), 1.0, atol=1e-6)
    part = uniform_partition(-1, 1, 2)
    f = StepFunction(part, [0.5, -2.0])
    g = StepFunction(part, [1.5, 1.0])
    rep = run_kernel_growth(product_kernel(f, g), 1.0, [2, 4, 8], (3, 2), CFG)
    np.testing.assert_allclose(rep.column("lower"), 3.0, rtol=1e-2)


def test_inclusion_order_check():
    with pytest.raises(RegimeError, match="p1 >= p2"):
        run_inclusion_check((3, 2), (4, 2), 1, CFG)


def test_inclusion_equal_pairs():
    rep = run_inclusion_check((3, 2), (3, 2), 2, CFG, size=3)
    assert all(rep.column("ok"))
    assert all(r <= 1 + 1e-6 for r in rep.column("ratio"))


def test_open_problem_examples():
    with pytest.raises(ValueError):
        explore_open_problem(2.5, 1, CFG)
    with pytest.raises(ValueError):
        explore_open_problem(1.0, 1, CFG)
    rank_one = np.outer([1.0, -2.0, 0.5], [3.0, 1.0, -1.0])
    rep = explore_open_problem(1.5, cfg=CFG, multipliers=[np.full((3, 3), 2.0), rank_one])
    assert rep.rows[0]["ratio"] == pytest.approx(1.0, abs=1e-3)
    assert rep.rows[1]["ratio"] == pytest.approx(1.0, rel=2e-2)
    assert not any(rep.column("flagged"))


def test_open_problem_batch_wellformed():
    rep = explore_open_problem(1.5, 2, CFG, size=3)
    assert len(rep.rows) == 2
    for r in rep.rows:
        assert np.isfinite(r["ratio"]) and r["lower"] <= r["upper"] + 1e-6


def test_report_body_excludes_timing():
    rep = run_kernel_growth(constant_kernel(2.0), 1.0, [2], (2, 2), CFG)
    assert "wall_time" in rep.rows[0]
    assert "wall_time" not in rep.body()["rows"][0]
    assert set(rep.body()) == {"experiment", "params", "rows", "fit", "version"}
