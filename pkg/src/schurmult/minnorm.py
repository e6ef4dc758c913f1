"""Minimum-norm solutions of underdetermined linear systems in ``l_e``."""

import numpy as np
from scipy.optimize import linprog, minimize

from .core import as_exponent, conjugate, lp_norm, signed_power


def _polish(mat, b, z):
    """Project ``z`` onto ``{mat z = b}`` along the least-squares direction."""
    for _ in range(2):
        r = b - mat @ z
        if not r.any():
            break
        z = z + np.linalg.lstsq(mat, r, rcond=None)[0]
    return z


def min_norm_solve(mat, b, e) -> np.ndarray:
    """Solve ``min ||z||_e`` subject to ``mat @ z = b``.

    ``e = 2`` uses the pseudo-inverse, ``e`` in ``{1, inf}`` a linear program,
    and ``1 < e < inf`` the smooth concave dual
    ``max_u b.u - ||mat^T u||_{e'}^{e'} / e'`` with ``z = psi_{e'}(mat^T u)``.
    The result is polished onto the affine constraint set; an inconsistent
    system is returned as its least-squares solution.
    """
    e = as_exponent(e)
    mat = np.asarray(mat, dtype=float)
    b = np.asarray(b, dtype=float)
    n = mat.shape[1]
    scale = np.abs(b).max() if b.size else 0.0
    if scale == 0.0:
        return np.zeros(n)
    bs = b / scale
    if not e.is_inf and e.value == 2.0:
        z = np.linalg.lstsq(mat, bs, rcond=None)[0]
    elif e.is_inf or e.value == 1.0:
        z = _lp_solve(mat, bs, e.is_inf)
    else:
        ec = conjugate(e).value

        def dual(u):
            w = mat.T @ u
            zz = signed_power(w, ec)
            f = np.sum(np.abs(w) ** ec) / ec - bs @ u
            return f, mat @ zz - bs

        u0 = np.linalg.lstsq(mat.T, np.linalg.lstsq(mat, bs, rcond=None)[0], rcond=None)[0]
        res = minimize(dual, u0, jac=True, method="BFGS",
                       options={"gtol": 1e-13, "maxiter": 2000})
        z = signed_power(mat.T @ res.x, ec)
    z = _polish(mat, bs, z)
    return z * scale


def _lp_solve(mat, b, inf_norm):
    m, n = mat.shape
    if inf_norm:
        # variables (z, s): min s, -s <= z_k <= s
        c = np.r_[np.zeros(n), 1.0]
        a_ub = np.block([[np.eye(n), -np.ones((n, 1))],
                         [-np.eye(n), -np.ones((n, 1))]])
        res = linprog(c, A_ub=a_ub, b_ub=np.zeros(2 * n),
                      A_eq=np.hstack([mat, np.zeros((m, 1))]), b_eq=b,
                      bounds=[(None, None)] * n + [(0, None)], method="highs")
        if res.status != 0:
            return np.linalg.lstsq(mat, b, rcond=None)[0]
        return res.x[:n]
    # variables (z+, z-) >= 0
    c = np.ones(2 * n)
    res = linprog(c, A_eq=np.hstack([mat, -mat]), b_eq=b,
                  bounds=[(0, None)] * (2 * n), method="highs")
    if res.status != 0:
        return np.linalg.lstsq(mat, b, rcond=None)[0]
    return res.x[:n] - res.x[n:]


def min_norm_value(mat, b, e) -> float:
    return lp_norm(min_norm_solve(mat, b, e), e)
