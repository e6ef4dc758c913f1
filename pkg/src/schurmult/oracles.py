"""Brute-force references for tiny instances.

These are deliberately naive: dense grids plus a short local polish. They
share no code path with the estimators beyond elementary norms, so they can
serve as independent checks.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import minimize

from .core import as_matrix, as_pair


def _circle(p, k):
    """``k`` points of the unit l_p circle in the upper half plane."""
    th = np.pi * np.arange(k) / k
    pts = np.stack([np.cos(th), np.sin(th)], axis=1)
    return pts / _norm_rows(pts, p)[:, None]


def _norm_rows(v, e):
    a = np.abs(v)
    if e.is_inf:
        return a.max(axis=-1)
    return np.sum(a ** e.value, axis=-1) ** (1.0 / e.value)


def opnorm_2col(a, pq, k: int = 2048, refine: int = 64) -> np.ndarray:
    """``||A||_{p->q}`` for a batch of matrices with two columns.

    ``a`` has shape ``(..., rows, 2)``. The unit circle of ``l_p`` is scanned
    at ``k`` angles (corners of the l_1 and l_inf circles included) and the
    best angle is rescanned on a finer local grid.
    """
    pq = as_pair(pq)
    a = np.asarray(a, dtype=float)
    pts = _circle(pq.p, k)
    vals = _norm_rows(np.einsum("...rc,kc->...kr", a, pts), pq.q)
    best = vals.max(axis=-1)
    arg = vals.argmax(axis=-1)
    th0 = np.pi * arg / k
    off = np.linspace(-np.pi / k, np.pi / k, refine)
    th = th0[..., None] + off
    loc = np.stack([np.cos(th), np.sin(th)], axis=-1)
    loc = loc / _norm_rows(loc, pq.p)[..., None]
    lv = _norm_rows(np.einsum("...rc,...kc->...kr", a, loc), pq.q)
    return np.maximum(best, lv.max(axis=-1))


def _sphere_grid(res: int) -> np.ndarray:
    """Hyperspherical grid on half of the unit sphere in R^4."""
    a1 = np.linspace(0, np.pi, res + 1)
    a2 = np.linspace(0, np.pi, res + 1)
    a3 = np.linspace(0, np.pi, res, endpoint=False)
    g1, g2, g3 = np.meshgrid(a1, a2, a3, indexing="ij")
    g1, g2, g3 = g1.ravel(), g2.ravel(), g3.ravel()
    return np.stack([np.cos(g1),
                     np.sin(g1) * np.cos(g2),
                     np.sin(g1) * np.sin(g2) * np.cos(g3),
                     np.sin(g1) * np.sin(g2) * np.sin(g3)], axis=1)


def multiplier_norm_2x2(m, pq, res: int = 24, polish: int = 8, k: int = 1024,
                        return_witness: bool = False):
    """Exhaustive estimate of ``||T_m||`` on ``B(l_p^2, l_q^2)``.

    Scans ``A`` over a grid of the 3-sphere (the ratio is scale invariant),
    then polishes the best grid points with Nelder-Mead. With
    ``return_witness`` the best ``A`` is returned as well.
    """
    m = as_matrix(m)
    if m.shape != (2, 2):
        raise ValueError("the exhaustive oracle handles 2x2 multipliers only")
    pq = as_pair(pq)
    if not np.any(m):
        return (0.0, np.eye(2)) if return_witness else 0.0
    grid = _sphere_grid(res).reshape(-1, 2, 2)
    units = np.eye(4).reshape(4, 2, 2)
    grid = np.concatenate([units, grid])
    den = opnorm_2col(grid, pq, k)
    num = opnorm_2col(m * grid, pq, k)
    ratio = np.where(den > 1e-12, num / np.maximum(den, 1e-300), 0.0)
    best = float(ratio.max())
    arg = grid[int(np.argmax(ratio))]

    def neg(v):
        a = v.reshape(2, 2)
        d = opnorm_2col(a, pq, k)
        return 0.0 if d < 1e-12 else -float(opnorm_2col(m * a, pq, k) / d)

    for idx in np.argsort(-ratio)[:polish]:
        res_ = minimize(neg, grid[idx].ravel(), method="Nelder-Mead",
                        options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 800})
        if -float(res_.fun) > best:
            best, arg = -float(res_.fun), res_.x.reshape(2, 2)
    return (best, arg) if return_witness else best


def _simplex_grid(step: int):
    w = np.arange(1, step) / step
    return np.stack([w, 1 - w], axis=1)


def dominated_norm_grid(t, pq, step: int = 200) -> float:
    """Grid minimum of ``||c||`` over ``T = d_nu o c o d_mu`` for 2x2 ``T``.

    Only ``p = q = 2`` is supported, where the inner norm is a largest
    singular value.
    """
    t = as_matrix(t)
    pq = as_pair(pq)
    if t.shape != (2, 2) or pq.p.is_inf or pq.q.is_inf or pq.p.value != 2 or pq.q.value != 2:
        raise ValueError("grid oracle covers 2x2 at p = q = 2 only")
    w = _simplex_grid(step)
    sw = np.sqrt(w)
    c = t[None, None] / sw[:, None, :, None] / sw[None, :, None, :]
    return float(np.linalg.norm(c, ord=2, axis=(2, 3)).min())


def lpq_grid(v, pq, step: int = 200) -> float:
    """Grid maximum of ``|Tr(v u)|`` over unit-dominated ``u`` for 2x2 ``v``.

    At ``p = q = 2`` the sup over contractions ``c`` for fixed weights is the
    nuclear norm of ``diag(sqrt a) v diag(sqrt b)``.
    """
    v = as_matrix(v)
    pq = as_pair(pq)
    if v.shape != (2, 2) or pq.p.is_inf or pq.q.is_inf or pq.p.value != 2 or pq.q.value != 2:
        raise ValueError("grid oracle covers 2x2 at p = q = 2 only")
    w = np.concatenate([_simplex_grid(step), [[1.0, 0.0], [0.0, 1.0]]])
    sw = np.sqrt(w)
    b = v[None, None] * sw[:, None, :, None] * sw[None, :, None, :]
    return float(np.linalg.norm(b, ord="nuc", axis=(2, 3)).max())


def matrix_unit_bound(m) -> float:
    """``max |m_ij|`` by enumerating every matrix unit ``E_ij``.

    ``||m o E_ij|| / ||E_ij|| = |m_ij|`` for every exponent pair, so this is
    a lower bound on ``||T_m||`` obtained without any closed form.
    """
    m = as_matrix(m)
    best = 0.0
    for i, j in itertools.product(range(m.shape[0]), range(m.shape[1])):
        e = np.zeros_like(m)
        e[i, j] = 1.0
        best = max(best, float(np.abs(m * e).sum()))
    return best


def one_atom_bound(m, pq) -> float:
    """Value of the best one-atom factorization ``m = y x^T`` (inf if rank > 1)."""
    m = as_matrix(m)
    u, s, vt = np.linalg.svd(m)
    if np.any(s[1:] > 1e-12 * max(s[0], 1e-300)):
        return float("inf")
    as_pair(pq)
    # on a single atom of mass one every L^e norm is the absolute value
    return float(np.abs(u[:, 0]).max() * s[0] * np.abs(vt[0]).max())
