"""Estimation of mixed operator norms ``||A : l_p^n -> l_q^m||``.

Four sources are combined by :func:`opnorm`:

* closed forms (:func:`opnorm_exact`),
* a multi-start signed power iteration giving certified lower bounds,
* a brute-force sampling oracle for tiny matrices,
* certified upper bounds from interpolation between exactly computable
  exponent pairs and, for at most four columns, from an inscribed polytope.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .core import (
    ExponentPair,
    InconsistencyError,
    as_matrix,
    as_pair,
    conjugate,
    holder_extremizer,
    lp_norm,
)

SIGN_ENUM_MAX_COLS = 16
HULL_MAX_COLS = 4


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 32
    max_iters: int = 500
    tol: float = 1e-12
    seed: int = 0
    oracle_samples: int = 2000

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1 or self.oracle_samples < 1:
            raise ValueError("restarts, max_iters and oracle_samples must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def rng(self, *stream) -> np.random.Generator:
        """Independent generator for one restart / instance index."""
        return np.random.default_rng([self.seed, *stream])


@dataclass
class NormEstimate:
    """Certified ``lower`` and ``upper`` bounds with provenance tags.

    ``witness`` is whatever attains ``lower``: a unit ``l_p`` vector for
    operator norms, a test matrix for multiplier norms.
    """

    lower: float
    upper: float = math.inf
    witness: Optional[np.ndarray] = None
    methods: tuple = field(default_factory=tuple)

    @property
    def certified(self) -> bool:
        return "heuristic" not in self.methods

    def scaled(self, factor: float) -> "NormEstimate":
        f = abs(factor)
        return NormEstimate(f * self.lower, f * self.upper, self.witness, self.methods)


def _lp_rows(y: np.ndarray, e) -> np.ndarray:
    """``l_e`` norm of each row of a 2-D array."""
    e_ = e
    a = np.abs(y)
    if e_.is_inf:
        return a.max(axis=1)
    if e_.value == 1.0:
        return a.sum(axis=1)
    if e_.value == 2.0:
        return np.sqrt(np.einsum("ij,ij->i", a, a))
    scale = a.max(axis=1)
    safe = np.where(scale > 0, scale, 1.0)
    return scale * np.sum((a / safe[:, None]) ** e_.value, axis=1) ** (1.0 / e_.value)


def _sign_vectors(n: int) -> np.ndarray:
    """All sign vectors with first entry +1, shape ``(2**(n-1), n)``."""
    if n == 1:
        return np.ones((1, 1))
    rest = np.array(list(itertools.product((1.0, -1.0), repeat=n - 1)))
    return np.hstack([np.ones((rest.shape[0], 1)), rest])


def _exact(a: np.ndarray, pq: ExponentPair):
    p, q = pq.p, pq.q
    m, n = a.shape
    if n == 1 or (not p.is_inf and p.value == 1.0):
        col = _lp_rows(a.T, q)
        j = int(np.argmax(col))
        x = np.zeros(n)
        x[j] = 1.0
        return float(col[j]), x, "p=1"
    if m == 1 or q.is_inf:
        pc = conjugate(p)
        rows = _lp_rows(a, pc)
        i = int(np.argmax(rows))
        x = holder_extremizer(a[i], pc)
        if not x.any():
            x = np.zeros(n)
            x[0] = 1.0
        return float(rows[i]), x, "q=inf"
    if m == n and not np.any(a - np.diag(np.diag(a))):
        d = np.abs(np.diag(a))
        j = int(np.argmax(d))
        x = np.zeros(n)
        x[j] = 1.0
        gap = q.reciprocal - p.reciprocal
        if gap <= 0:
            return float(d[j]), x, "diagonal"
        # Hölder: ||D||_{p->q} = ||d||_r with 1/r = 1/q - 1/p
        r = 1.0 / gap
        val = lp_norm(d, r)
        if val == 0:
            return 0.0, x, "diagonal"
        x = (d / val) ** (0.0 if p.is_inf else r / p.value)
        return val, x, "diagonal"
    if not p.is_inf and not q.is_inf and p.value == 2.0 and q.value == 2.0:
        _, s, vt = np.linalg.svd(a)
        return float(s[0]), vt[0].copy(), "svd"
    if p.is_inf and n <= SIGN_ENUM_MAX_COLS:
        eps = _sign_vectors(n)
        vals = _lp_rows(eps @ a.T, q)
        k = int(np.argmax(vals))
        return float(vals[k]), eps[k].copy(), "signs"
    return None


def opnorm_exact(a, pq) -> Optional[float]:
    """Exact ``||A||_{p->q}`` when a closed form applies, else ``None``.

    Closed forms: ``p = 1`` (largest column ``l_q`` norm), ``q = inf``
    (largest row ``l_{p'}`` norm), ``p = q = 2`` (largest singular value),
    ``p = inf`` with at most 16 columns (enumeration of sign vectors, the
    extreme points of the cube). A single row or column and square diagonal
    matrices (Hölder) are also exact.
    """
    res = _exact(as_matrix(a), as_pair(pq))
    return None if res is None else res[0]


def power_iteration(a, pq, x0, max_iters: int = 500, tol: float = 1e-12):
    """Signed power iteration from ``x0``.

    Each step is ``x <- ext_{p'}(A^T ext_q(A x))`` with ``ext_e`` the Hölder
    extremizer, so ``||A x||_q`` never decreases.

    Returns
    -------
    value, x, history
      final objective, unit ``l_p`` iterate and the objective per step.
    """
    a = as_matrix(a)
    pq = as_pair(pq)
    p, q = pq.p, pq.q
    pc = conjugate(p)
    x = np.asarray(x0, dtype=float)
    nx = lp_norm(x, p)
    if nx == 0:
        raise ValueError("starting vector must be nonzero")
    x = x / nx
    val = lp_norm(a @ x, q)
    history = [val]
    for _ in range(max_iters):
        g = a.T @ holder_extremizer(a @ x, q)
        if not g.any():
            break
        x_new = holder_extremizer(g, pc)
        new = lp_norm(a @ x_new, q)
        if new < val:
            # rounding only; the step is monotone in exact arithmetic
            break
        improved = new - val
        x, val = x_new, new
        history.append(val)
        if improved <= tol * (1.0 + val):
            break
    return val, x, history


def _starts(a: np.ndarray, pq: ExponentPair, cfg: SearchConfig):
    m, n = a.shape
    starts = [np.ones(n)]
    if n <= cfg.restarts:
        starts.extend(np.eye(n))
    if m <= cfg.restarts:
        pc = conjugate(pq.p)
        for row in a:
            if row.any():
                starts.append(holder_extremizer(row, pc))
    n_random = max(cfg.restarts - len(starts), cfg.restarts // 4, 1)
    for k in range(n_random):
        starts.append(cfg.rng(1, k).standard_normal(n))
    return starts


def opnorm_power_lower(a, pq, cfg: SearchConfig = SearchConfig()) -> NormEstimate:
    """Certified lower bound by multi-start signed power iteration.

    Starts are the uniform vector, the basis vectors, the Hölder duals of the
    rows and seeded random directions. Ties are broken by start index.
    ``upper`` is finite only when a closed form applies.
    """
    a = as_matrix(a)
    pq = as_pair(pq)
    best_val, best_x = -1.0, None
    for x0 in _starts(a, pq, cfg):
        val, x, _ = power_iteration(a, pq, x0, cfg.max_iters, cfg.tol)
        if val > best_val:
            best_val, best_x = val, x
    methods = ("power",)
    upper = math.inf
    ex = _exact(a, pq)
    if ex is not None:
        upper = ex[0]
        methods = ("power", "exact")
    lower = lp_norm(a @ best_x, pq.q)
    return NormEstimate(min(lower, upper), upper, best_x, methods)


def opnorm_oracle(a, pq, cfg: SearchConfig = SearchConfig(), steps: int = 50) -> float:
    """Brute-force lower bound: random points on the unit ``l_p`` sphere,
    each polished by ``steps`` sweeps of coordinate ascent.

    Independent of the power iteration; meant for matrices up to 4x4.
    """
    a = as_matrix(a)
    pq = as_pair(pq)
    p, q = pq.p, pq.q
    n = a.shape[1]
    rng = cfg.rng(2)
    x = rng.standard_normal((cfg.oracle_samples, n))
    x /= _lp_rows(x, p)[:, None]
    val = _lp_rows(x @ a.T, q)
    h = np.full(len(x), 0.25)
    for _ in range(steps):
        moved = np.zeros(len(x), dtype=bool)
        for i in range(n):
            for s in (1.0, -1.0):
                y = x.copy()
                y[:, i] += s * h
                ny = _lp_rows(y, p)
                ok = ny > 0
                y[ok] /= ny[ok, None]
                v = _lp_rows(y @ a.T, q)
                better = ok & (v > val)
                x[better] = y[better]
                val[better] = v[better]
                moved |= better
        h[~moved] *= 0.5
    return float(val.max())


def _interp_candidates(tx: float, ty: float, grid: int = 129):
    """Segments through ``(tx, ty)`` in the ``(1/p, 1/q)`` plane whose two
    endpoints are exactly computable. Yields ``(P0, P1, theta)``."""
    # right edge (p = 1) to bottom edge (q = inf)
    for y1 in np.linspace(ty, 1.0, grid):
        if y1 <= 0:
            continue
        theta = 1.0 - ty / y1
        if not 0.0 < theta < 1.0:
            continue
        x2 = (tx - (1.0 - theta)) / theta
        if -1e-15 <= x2 <= 1.0 + 1e-15:
            yield (1.0, y1), (min(max(x2, 0.0), 1.0), 0.0), theta
    # the Hilbert point (2, 2) to either edge
    if tx > 0.5:
        theta = 2.0 * tx - 1.0
        y1 = 0.5 + (ty - 0.5) / theta
        if 0.0 < theta < 1.0 and 0.0 <= y1 <= 1.0:
            yield (0.5, 0.5), (1.0, y1), theta
    if ty < 0.5:
        theta = 1.0 - 2.0 * ty
        x1 = 0.5 + (tx - 0.5) / theta
        if 0.0 < theta < 1.0 and 0.0 <= x1 <= 1.0:
            yield (0.5, 0.5), (x1, 0.0), theta


def _endpoint_norm(a: np.ndarray, pt) -> float:
    x, y = pt
    p = math.inf if x == 0 else 1.0 / x
    q = math.inf if y == 0 else 1.0 / y
    res = _exact(a, ExponentPair(p, q))
    assert res is not None
    return res[0]


def opnorm_interp_upper(a, pq) -> Optional[float]:
    """Riesz-Thorin upper bound ``N0^(1-t) N1^t`` or ``None``.

    Endpoints are restricted to pairs where the real and complex norms agree
    and a closed form exists: ``p = 1`` (any q), ``q = inf`` (any p) and
    ``p = q = 2``. Degenerate segments (target at an endpoint) are skipped.
    """
    a = as_matrix(a)
    pq = as_pair(pq)
    tx, ty = pq.p.reciprocal, pq.q.reciprocal
    best = None
    for p0, p1, theta in _interp_candidates(tx, ty):
        bound = _endpoint_norm(a, p0) ** (1.0 - theta) * _endpoint_norm(a, p1) ** theta
        if best is None or bound < best:
            best = bound
    return None if best is None else float(best)


def _sphere_points(n: int, p, count: int, rng) -> np.ndarray:
    pts = [np.eye(n), -np.eye(n)]
    signs = _sign_vectors(n)
    signs = np.vstack([signs, -signs])
    pts.append(signs / _lp_rows(signs, p)[:, None])
    g = rng.standard_normal((count, n))
    g /= _lp_rows(g, p)[:, None]
    pts.extend([g, -g])
    return np.vstack(pts)


def opnorm_hull_upper(a, pq, extra_points=None, count: Optional[int] = None,
                      refine_rounds: int = 12, seed: int = 0,
                      rel_gap: float = 1e-6) -> Optional[float]:
    """Certified upper bound for at most four columns (up to rounding).

    A symmetric point set on the unit ``l_p`` sphere spans a polytope ``P``.
    Every ``x`` in the unit ball lies in the cone over some facet ``F`` with
    outward normal ``h`` and offset ``b``; then ``x = s z`` with ``z`` in ``F``
    and ``s <= ||h||_{p'} / b``. Convexity bounds ``||A z||_q`` by the largest
    vertex value of ``F``, which gives the bound facet by facet. Facets with
    the largest bound are refined by adding the sphere point touching them,
    until the bound is within ``rel_gap`` of the best sampled value.
    """
    a = as_matrix(a)
    pq = as_pair(pq)
    p, q = pq.p, pq.q
    n = a.shape[1]
    if n == 1:
        return lp_norm(a[:, 0], q)
    if n > HULL_MAX_COLS:
        return None
    pc = conjugate(p)
    if count is None:
        count = {2: 32, 3: 120, 4: 400}[n]
    rng = np.random.default_rng([seed, 3])
    pts = _sphere_points(n, p, count, rng)
    if extra_points is not None:
        e = np.atleast_2d(np.asarray(extra_points, dtype=float))
        e = e[_lp_rows(e, p) > 0]
        e = e / _lp_rows(e, p)[:, None]
        pts = np.vstack([pts, e, -e])
    polytope = p.is_inf or p.value == 1.0
    best = math.inf
    for _ in range(refine_rounds + 1):
        try:
            hull = ConvexHull(pts)
        except QhullError:
            return None if not math.isfinite(best) else best
        normals = hull.equations[:, :-1]
        # qhull offsets, shrunk against its rounding
        offsets = -hull.equations[:, -1] - 1e-12
        if np.any(offsets <= 0):
            return None if not math.isfinite(best) else best
        inv_r = _lp_rows(normals, pc) / offsets
        vals = _lp_rows(pts @ a.T, q)
        local = vals[hull.simplices].max(axis=1) * np.maximum(inv_r, 1.0)
        bound = float(local.max())
        best = min(best, bound)
        # vals.max() is itself attained on the sphere, hence a lower bound
        if polytope or best <= vals.max() * (1.0 + rel_gap):
            break
        worst = np.argsort(-local)[: max(4, len(local) // 25)]
        touch = np.array([holder_extremizer(normals[k], pc) for k in worst])
        pts = np.vstack([pts, touch, -touch])
    return best


def opnorm_upper(a, pq, witness=None):
    """Best certified upper bound and its tag, or ``(inf, None)``."""
    a = as_matrix(a)
    pq = as_pair(pq)
    ex = _exact(a, pq)
    if ex is not None:
        return ex[0], "exact"
    best, tag = math.inf, None
    it = opnorm_interp_upper(a, pq)
    if it is not None:
        best, tag = it, "interpolation"
    if a.shape[1] <= HULL_MAX_COLS:
        hu = opnorm_hull_upper(a, pq, extra_points=witness)
        if hu is not None and hu < best:
            best, tag = hu, "hull"
    return best, tag


def opnorm(a, pq, cfg: SearchConfig = SearchConfig()) -> NormEstimate:
    """Combined estimate: best certified lower and upper bounds."""
    a = as_matrix(a)
    pq = as_pair(pq)
    methods = []
    lower, witness = 0.0, None
    upper = math.inf
    ex = _exact(a, pq)
    if ex is not None:
        lower, witness, upper = ex[0], ex[1], ex[0]
        methods.append("exact")
    pw = opnorm_power_lower(a, pq, cfg)
    methods.append("power")
    if pw.lower > lower:
        lower, witness = pw.lower, pw.witness
    if a.size <= 16:
        orc = opnorm_oracle(a, pq, cfg)
        methods.append("oracle")
        # the oracle keeps no witness; only adopt it on a clear improvement
        if orc > lower * (1 + 1e-9) + 1e-12:
            lower, witness = orc, None
    if ex is None:
        it = opnorm_interp_upper(a, pq)
        if it is not None:
            methods.append("interpolation")
            upper = min(upper, it)
        if a.shape[1] <= HULL_MAX_COLS:
            hu = opnorm_hull_upper(a, pq, extra_points=witness)
            if hu is not None:
                methods.append("hull")
                upper = min(upper, hu)
    slack = 1e-9 * max(1.0, upper if math.isfinite(upper) else lower)
    if lower > upper + slack:
        raise InconsistencyError(
            f"certified lower {lower!r} exceeds certified upper {upper!r}")
    return NormEstimate(min(lower, upper), upper, witness, tuple(methods))
