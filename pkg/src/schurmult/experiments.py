"""Reproducible experiments: triangular truncation, kernel growth, inclusions."""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field, asdict
from typing import Optional, Sequence

import numpy as np

from .core import ExponentPair, RegimeError, as_matrix, as_pair
from .discretize import KernelSpec, discretize_kernel, lift_operator, uniform_partition
from .opnorm import SearchConfig
from .oracles import multiplier_norm_2x2
from .schur import certificate_upper, factorization_solve, multiplier_norm_lower

VERSION = "0.1.0"

INCLUSION_SLACK = 0.05
EXHAUSTIVE_SLACK = 1e-3


@dataclass
class ExperimentReport:
    """Named experiment with its parameters, per-instance rows and optional fit.

    ``wall_time`` entries of the rows are kept out of :meth:`body`, which is
    the part that must be reproducible byte for byte.
    """

    experiment: str
    params: dict
    rows: list = field(default_factory=list)
    fit: Optional[dict] = None
    version: str = VERSION

    def body(self) -> dict:
        rows = [{k: v for k, v in r.items() if k != "wall_time"} for r in self.rows]
        return {"experiment": self.experiment, "params": self.params, "rows": rows,
                "fit": self.fit, "version": self.version}

    def as_dict(self, timing: bool = True) -> dict:
        out = self.body()
        if timing:
            out["rows"] = [dict(r) for r in self.rows]
        return out

    def column(self, key) -> list:
        return [r[key] for r in self.rows]


def witness_digest(a) -> str:
    if a is None:
        return ""
    a = np.ascontiguousarray(np.asarray(a, dtype=np.float64))
    h = hashlib.sha256(str(a.shape).encode())
    h.update(a.tobytes())
    return h.hexdigest()[:16]


def _config_params(cfg: SearchConfig) -> dict:
    return asdict(cfg)


def _pair_params(pq: ExponentPair) -> dict:
    return {"p": str(pq.p), "q": str(pq.q)}


def _finite(x) -> Optional[float]:
    x = float(x)
    return x if np.isfinite(x) else None


def _row(**kw) -> dict:
    return {k: (_finite(v) if isinstance(v, (float, np.floating)) else v) for k, v in kw.items()}


def triangle_matrix(n: int) -> np.ndarray:
    """Upper-triangular ones: entry ``(i, j)`` is 1 when ``i <= j``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.triu(np.ones((n, n)))


def hilbert_witness(n: int) -> np.ndarray:
    """Antisymmetric Hilbert-type matrix ``1 / (i - j)`` with zero diagonal."""
    if n < 2:
        raise ValueError("n must be >= 2")
    i = np.arange(n)
    d = (i[:, None] - i[None, :]).astype(float)
    with np.errstate(divide="ignore"):
        h = np.where(d != 0, 1.0 / d, 0.0)
    return h


def _require_unbounded_regime(pq: ExponentPair):
    pq.require_regime()
    if (not pq.p.is_inf and pq.p.value == 1.0) or pq.q.is_inf:
        raise RegimeError("logarithmic growth of triangular truncation needs q <= p "
                          f"with p != 1 and q != inf, got p={pq.p}, q={pq.q}")


def _pad(a: np.ndarray, shape) -> np.ndarray:
    out = np.zeros(shape)
    out[: a.shape[0], : a.shape[1]] = a
    return out


def _log_fit(sizes, values) -> Optional[dict]:
    x = np.log(np.asarray(sizes, dtype=float))
    if len(x) < 2 or np.ptp(x) == 0:
        return None
    slope, intercept = np.polyfit(x, np.asarray(values, dtype=float), 1)
    return {"slope": float(slope), "intercept": float(intercept)}


def run_triangle_growth(sizes: Sequence[int], pq=(2, 2), cfg: SearchConfig = SearchConfig(),
                        ascent_restarts: int = 0) -> ExperimentReport:
    """Lower bounds on the triangular truncation norm and a fit against ``ln n``.

    Every size starts from the Hilbert witness and from the best witness of
    the previous (smaller) size padded with zeros, so the bounds cannot drop.
    """
    pq = as_pair(pq)
    _require_unbounded_regime(pq)
    sizes = [int(n) for n in sizes]
    if any(n < 2 for n in sizes):
        raise ValueError("sizes must be >= 2 (n = 1 only anchors ln n = 0)")
    report = ExperimentReport("triangle", {**_pair_params(pq), "sizes": sizes,
                                           "config": _config_params(cfg),
                                           "ascent_restarts": ascent_restarts})
    prev = None
    results = {}
    for n in sorted(set(sizes)):
        t0 = time.perf_counter()
        starts = [hilbert_witness(n)]
        if prev is not None:
            starts.append(_pad(prev, (n, n)))
        est = multiplier_norm_lower(triangle_matrix(n), pq, cfg, starts=starts,
                                    ascent_restarts=ascent_restarts)
        prev = est.witness
        results[n] = _row(size=n, lower=est.lower, upper=est.upper,
                          methods=list(est.methods), witness=witness_digest(est.witness),
                          wall_time=time.perf_counter() - t0)
    report.rows = [results[n] for n in sizes]
    report.fit = _log_fit(sizes, report.column("lower"))
    return report


def _lift_uniform(a: np.ndarray, k: int, n: int, pq: ExponentPair) -> Optional[np.ndarray]:
    if n % k:
        return None
    g = [n // k] * k
    fine = uniform_partition(0.0, 1.0, n)
    return lift_operator(a, fine, fine, g, g, pq)


def run_kernel_growth(spec: KernelSpec, truncation: float = 1.0, sizes: Sequence[int] = (2, 4, 8),
                      pq=(2, 2), cfg: SearchConfig = SearchConfig(),
                      ascent_restarts: Optional[int] = None) -> ExperimentReport:
    """Multiplier norms of cell-averaged kernels on ``[-L, L)^2`` at growing resolution.

    The witness found at each size is lifted to the next size whenever the
    grids nest, so refinements can only raise the bound.
    """
    pq = as_pair(pq)
    pq.require_regime()
    if not truncation > 0:
        raise ValueError("truncation must be positive")
    sizes = [int(n) for n in sizes]
    if any(n < 1 for n in sizes):
        raise ValueError("sizes must be positive")
    lo, hi = -float(truncation), float(truncation)
    report = ExperimentReport("kernel-growth",
                              {**_pair_params(pq), "kernel": spec.kind,
                               "kernel_params": {k: v for k, v in spec.params.items()
                                                 if isinstance(v, (int, float, str))},
                               "truncation": float(truncation), "sizes": sizes,
                               "config": _config_params(cfg)})
    prev = None
    results = {}
    for n in sorted(set(sizes)):
        t0 = time.perf_counter()
        part = uniform_partition(lo, hi, n)
        m = discretize_kernel(spec, part, part)
        starts = []
        if n >= 2:
            # the flipped Hilbert matrix targets the anti-triangular sign pattern
            starts.append(hilbert_witness(n)[::-1])
        if prev is not None:
            lifted = _lift_uniform(prev, prev.shape[0], n, pq)
            if lifted is not None:
                starts.append(lifted)
        est = multiplier_norm_lower(m, pq, cfg, starts=starts, ascent_restarts=ascent_restarts)
        prev = est.witness
        results[n] = _row(size=n, lower=est.lower, upper=est.upper,
                          methods=list(est.methods), witness=witness_digest(est.witness),
                          wall_time=time.perf_counter() - t0)
    report.rows = [results[n] for n in sizes]
    report.fit = _log_fit(sizes, report.column("lower"))
    return report


def _check_inclusion_order(pq1: ExponentPair, pq2: ExponentPair):
    pq1.require_regime()
    pq2.require_regime()
    if pq1.p.reciprocal > pq2.p.reciprocal or pq1.q.reciprocal < pq2.q.reciprocal:
        raise RegimeError("the inclusion M(p1,q1) in M(p2,q2) needs p1 >= p2 and q1 <= q2, "
                          f"got {pq1} and {pq2}")


def run_inclusion_check(pq1, pq2, trials: int = 20, cfg: SearchConfig = SearchConfig(),
                        size: int = 4, exhaustive: bool = False) -> ExperimentReport:
    """Compare ``||T_m||`` at ``(p2, q2)`` with an upper bound at ``(p1, q1)``.

    Seeded Gaussian multipliers. The estimator variant bounds the left side
    with :func:`multiplier_norm_lower` and passes when the ratio is at most
    1.05; the exhaustive variant (2x2 only) uses the grid oracle and an
    additive slack of 1e-3.
    """
    pq1, pq2 = as_pair(pq1), as_pair(pq2)
    _check_inclusion_order(pq1, pq2)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if exhaustive:
        size = 2
    report = ExperimentReport("inclusion",
                              {"p1": str(pq1.p), "q1": str(pq1.q), "p2": str(pq2.p),
                               "q2": str(pq2.q), "trials": int(trials), "size": int(size),
                               "exhaustive": bool(exhaustive), "config": _config_params(cfg)})
    for k in range(trials):
        t0 = time.perf_counter()
        m = cfg.rng(7, k).standard_normal((size, size))
        cert = factorization_solve(m, pq1, cfg=cfg)
        upper1 = certificate_upper(cert, pq1)
        if exhaustive:
            lower2 = multiplier_norm_2x2(m, pq2)
            ok = lower2 <= upper1 + EXHAUSTIVE_SLACK
            digest = witness_digest(m)
        else:
            est = multiplier_norm_lower(m, pq2, cfg)
            lower2 = est.lower
            ok = lower2 <= upper1 * (1.0 + INCLUSION_SLACK)
            digest = witness_digest(est.witness)
        report.rows.append(_row(trial=k, size=size, lower=lower2, upper=upper1,
                                ratio=lower2 / upper1 if upper1 > 0 else 0.0,
                                ok=bool(ok), witness=digest,
                                wall_time=time.perf_counter() - t0))
    return report


def explore_open_problem(p, trials: int = 8, cfg: SearchConfig = SearchConfig(), size: int = 4,
                         multipliers: Optional[Sequence] = None) -> ExperimentReport:
    """Estimate ``||T_m||_(p,p) / ||T_m||_(p,1)`` on random multipliers.

    Both norms are lower bounds from the direct search, each paired with a
    factorization upper bound. Instances whose ratio leaves ``[1/2, 2]`` are
    flagged for inspection; nothing is asserted.
    """
    pp = as_pair((p, p))
    if pp.p.is_inf or not 1.0 < pp.p.value <= 2.0:
        raise ValueError(f"p must lie in (1, 2], got {p}")
    p1 = ExponentPair(pp.p, 1)
    if multipliers is None:
        if trials < 1:
            raise ValueError("trials must be >= 1")
        multipliers = [cfg.rng(8, k).standard_normal((size, size)) for k in range(trials)]
    multipliers = [as_matrix(m) for m in multipliers]
    report = ExperimentReport("open-problem",
                              {"p": str(pp.p), "trials": len(multipliers), "size": int(size),
                               "config": _config_params(cfg)})
    for k, m in enumerate(multipliers):
        t0 = time.perf_counter()
        a = multiplier_norm_lower(m, pp, cfg)
        b = multiplier_norm_lower(m, p1, cfg)
        ua = certificate_upper(factorization_solve(m, pp, cfg=cfg), pp)
        ub = certificate_upper(factorization_solve(m, p1, cfg=cfg), p1)
        ratio = a.lower / b.lower if b.lower > 0 else 1.0
        report.rows.append(_row(trial=k, lower=a.lower, upper=ua, lower_p1=b.lower,
                                upper_p1=ub, ratio=ratio,
                                flagged=bool(not 0.5 <= ratio <= 2.0),
                                witness=witness_digest(a.witness),
                                wall_time=time.perf_counter() - t0))
    return report
