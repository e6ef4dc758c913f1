"""Acceptance criteria. Each test prints one PASS/FAIL line."""

import subprocess
import sys
import time

import numpy as np
import pytest

from schurmult.core import ExponentPair, lp_norm
from schurmult.discretize import (Partition, StepFunction, coarsen_matrix,
                                  conditional_expectation, discretize_kernel, grid_kernel,
                                  lift_operator, merge_partition, partition_isometry,
                                  signstep_kernel, uniform_partition)
from schurmult.experiments import (run_inclusion_check, run_kernel_growth,
                                   run_triangle_growth)
from schurmult.opnorm import SearchConfig, opnorm_exact, opnorm_oracle, opnorm_power_lower
from schurmult.oracles import matrix_unit_bound, multiplier_norm_2x2, one_atom_bound
from schurmult.schur import (certificate_upper, duality_report, factorization_solve,
                             multiplier_norm_lower)

CFG = SearchConfig()


@pytest.fixture
def verdict(capsys):
    def report(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return report


def test_c01_exact_norm_agreement(verdict):
    t0 = time.perf_counter()
    worst = 0.0
    for pq in [(2, 2), (1, 3), (5, "inf")]:
        pair = ExponentPair(*pq)
        for s in range(20):
            a = np.random.default_rng([1, s]).standard_normal((6, 6))
            est = opnorm_power_lower(a, pq, CFG)
            # recompute the value from the witness alone
            power = lp_norm(a @ est.witness, pair.q) / lp_norm(est.witness, pair.p)
            exact = opnorm_exact(a, pq)
            worst = max(worst, abs(power - exact) / exact)
    elapsed = time.perf_counter() - t0
    verdict(1, worst <= 1e-6 and elapsed < 10,
            f"max rel err {worst:.2e}, {elapsed:.1f}s")


def test_c02_oracle_agreement(verdict):
    worst, below = 0.0, 0.0
    for pq in [(3, 2), (4, 1.5)]:
        for s in range(10):
            a = np.random.default_rng([2, s]).standard_normal((3, 3))
            power = opnorm_power_lower(a, pq, CFG).lower
            orc = opnorm_oracle(a, pq, CFG)
            worst = max(worst, abs(power - orc))
            below = max(below, orc - power)
    verdict(2, worst <= 1e-3 and below <= 1e-3,
            f"max |power - oracle| {worst:.2e}, max shortfall {below:.2e}")


def test_c03_rank_one_law(verdict):
    worst = 0.0
    for s in range(10):
        rng = np.random.default_rng([3, s])
        m = np.outer(rng.standard_normal(4), rng.standard_normal(4))
        lo_ref, up_ref = matrix_unit_bound(m), one_atom_bound(m, (3, 2))
        assert up_ref == pytest.approx(lo_ref, rel=1e-12)
        rep = duality_report(m, (3, 2), CFG)
        worst = max(worst, abs(rep.lower / lo_ref - 1), abs(rep.upper / lo_ref - 1))
    verdict(3, worst <= 1e-2, f"max relative deviation {worst:.2e}")


REGIME_PAIRS = [(1, 1), (2, 1), (2, 2), (3, 2), (4, 1.5), ("inf", 1), ("inf", 2),
                ("inf", "inf")]


def test_c04_constant_multiplier(verdict):
    worst = 0.0
    for c in [0.0, 1.0, -2.5]:
        for shape in [(1, 1), (2, 3), (4, 2), (6, 6)]:
            m = np.full(shape, c)
            for pq in REGIME_PAIRS:
                lo = multiplier_norm_lower(m, pq, CFG).lower
                up = certificate_upper(factorization_solve(m, pq, cfg=CFG), pq)
                worst = max(worst, abs(lo - abs(c)), abs(up - abs(c)))
    verdict(4, worst <= 1e-6, f"max |estimate - |c|| {worst:.2e}")


def test_c05_l1_endpoint(verdict):
    worst = 0.0
    for s in range(20):
        m = np.random.default_rng([5, s]).standard_normal((4, 4))
        lo = multiplier_norm_lower(m, (1, 1), CFG).lower
        worst = max(worst, abs(lo - np.abs(m).max()))
    verdict(5, worst <= 1e-3, f"max |lower - max|m_ij|| {worst:.2e}")


def test_c06_duality_sandwich(verdict):
    gaps, violations, escal = [], 0, 0
    for s in range(10):
        m = np.random.default_rng([6, s]).standard_normal((3, 3))
        rep = duality_report(m, (4, 2), CFG, gap_target=0.15)
        violations += rep.lower > rep.upper + 1e-6
        gaps.append(rep.gap)
        escal += rep.escalations
    med = float(np.median(gaps))
    verdict(6, violations == 0 and med <= 0.15,
            f"violations {violations}, median gap {med:.4f}, max gap {max(gaps):.4f}, "
            f"escalations {escal}")


def test_c07_factorization_exactness(verdict):
    worst_res, worst_simplex, count = 0.0, 0.0, 0
    cases = [((3, 3), (4, 2)), ((2, 4), (2, 2)), ((4, 3), (3, 1)), ((3, 3), ("inf", 1.5)),
             ((3, 2), (1.5, 1.5))]
    for k, (shape, pq) in enumerate(cases):
        for s in range(3):
            m = np.random.default_rng([7, k, s]).standard_normal(shape)
            cert = factorization_solve(m, pq, cfg=CFG)
            count += 1
            worst_res = max(worst_res, cert.residual, cert.recompute_residual(m))
            w = cert.atom_weights
            worst_simplex = max(worst_simplex, abs(w.sum() - 1), max(0.0, -w.min()))
    verdict(7, worst_res <= 1e-8 and worst_simplex <= 1e-12,
            f"{count} certificates, max residual {worst_res:.1e}, simplex error {worst_simplex:.1e}")


def test_c08_triangle_growth(verdict):
    t0 = time.perf_counter()
    rep = run_triangle_growth([8, 16, 32, 64, 128, 256], (2, 2), CFG)
    elapsed = time.perf_counter() - t0
    lows = rep.column("lower")
    mono = all(b >= a - 1e-6 for a, b in zip(lows, lows[1:]))
    slope = rep.fit["slope"]
    verdict(8, mono and 0.25 <= slope <= 0.40 and elapsed < 120,
            f"lower {[round(v, 4) for v in lows]}, slope {slope:.4f}, {elapsed:.1f}s")


def test_c09_signstep_unboundedness(verdict):
    rep = run_kernel_growth(signstep_kernel((-1.0, 1.0)), 1.0, [2, 4, 8, 16, 32, 64], (2, 2), CFG)
    lows = rep.column("lower")
    strict = all(b > a for a, b in zip(lows, lows[1:]))
    ratio = lows[-1] / lows[0]
    verdict(9, strict and ratio >= 2.0,
            f"lower {[round(v, 4) for v in lows]}, strictly increasing {strict}, "
            f"last/first {ratio:.4f}")


def test_c10_discretization_exactness(verdict):
    p = uniform_partition(-1.0, 1.0, 2)
    m = discretize_kernel(signstep_kernel((-1.0, 1.0)), p, p)
    err = float(np.abs(m - np.array([[0.0, 0.5], [0.5, 1.0]])).max())
    verdict(10, err <= 1e-12, f"max entry error {err:.1e}")


def _random_fine_partition(rng):
    cuts = np.sort(rng.uniform(0.05, 0.95, 3))
    while np.min(np.diff(np.r_[0.0, cuts, 1.0])) < 0.02:
        cuts = np.sort(rng.uniform(0.05, 0.95, 3))
    e = np.r_[0.0, cuts, 1.0]
    return Partition(zip(e[:-1], e[1:]))


def test_c11_coarsening_monotonicity(verdict):
    pq = (3, 2)
    worst = -np.inf
    for s in range(10):
        rng = np.random.default_rng([11, s])
        pa, pb = _random_fine_partition(rng), _random_fine_partition(rng)
        fine = discretize_kernel(grid_kernel(rng.standard_normal((4, 4)), pa, pb), pa, pb)
        coarse = coarsen_matrix(fine, pa, pb, [2, 2], [2, 2])
        direct = discretize_kernel(grid_kernel(fine, pa, pb),
                                   merge_partition(pa, [2, 2]), merge_partition(pb, [2, 2]))
        np.testing.assert_allclose(coarse, direct, atol=1e-12)
        c_norm, c_wit = multiplier_norm_2x2(coarse, pq, return_witness=True)
        lifted = lift_operator(c_wit, pa, pb, [2, 2], [2, 2], pq)
        f_norm = multiplier_norm_lower(fine, pq, CFG, starts=[lifted]).lower
        worst = max(worst, c_norm - f_norm)
    verdict(11, worst <= 1e-3, f"max (coarse - fine) {worst:.2e}")


def test_c12_isometry_contraction(verdict):
    rng = np.random.default_rng(12)
    iso, contr = 0.0, -np.inf
    for _ in range(1000):
        coarse_edges = np.unique(np.r_[-2.0, np.sort(rng.uniform(-2, 2, 3)), 2.0])
        fine_edges = np.unique(np.r_[coarse_edges, rng.uniform(-2, 2, 5)])
        fine = Partition(zip(fine_edges[:-1], fine_edges[1:]))
        coarse = Partition(zip(coarse_edges[:-1], coarse_edges[1:]))
        f = StepFunction(fine, rng.standard_normal(len(fine)) * rng.exponential(3.0))
        for e in [1, 1.5, 2, 3, "inf"]:
            nf = f.norm(e)
            iso = max(iso, abs(lp_norm(partition_isometry(f, e), e) - nf) / nf)
            contr = max(contr, conditional_expectation(f, coarse, e).norm(e) - nf)
    verdict(12, iso <= 1e-12 and contr <= 1e-12,
            f"max isometry rel err {iso:.1e}, max contraction excess {contr:.1e}")


def test_c13_inclusion_ordering(verdict):
    exh = run_inclusion_check((4, 2), (3, 2.5), 20, CFG, exhaustive=True)
    est = run_inclusion_check((4, 2), (3, 2.5), 20, CFG, size=4)
    excess = max(r["lower"] - r["upper"] for r in exh.rows)
    ratio = max(est.column("ratio"))
    verdict(13, all(exh.column("ok")) and all(est.column("ok")),
            f"2x2 max (lower - upper) {excess:.2e}, 4x4 max ratio {ratio:.4f}")


CLI_RUNS = [
    ["triangle", "--sizes", "4,8", "--seed", "3"],
    ["kernel-growth", "--kernel", "gauss:0.5", "--sizes", "2,4", "--p", "3", "--q", "2"],
    ["inclusion", "--trials", "2", "--size", "3", "--seed", "5"],
    ["open-problem", "--trials", "1", "--size", "3", "--seed", "9"],
]


def test_c14_determinism(verdict, tmp_path):
    same = []
    for k, args in enumerate(CLI_RUNS):
        outs = []
        for rep in range(2):
            out = tmp_path / f"r{k}_{rep}.json"
            subprocess.run([sys.executable, "-m", "schurmult", *args, "--out", str(out)],
                           check=True)
            outs.append(out.read_bytes())
        same.append(outs[0] == outs[1])
    verdict(14, all(same), f"identical reports {sum(same)}/{len(same)}")
