"""Interval partitions, step functions and cell-averaged kernel matrices.

A bounded kernel ``phi(s, t)`` on a rectangle becomes the finite multiplier

    phi_ij = (1 / (|A_j| |B_i|)) * integral of phi over A_j x B_i

with rows indexed by the cells ``B_i`` of the ``t`` partition and columns by
the cells ``A_j`` of the ``s`` partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import as_exponent, as_matrix, as_pair


@dataclass(frozen=True)
class Partition:
    """Pairwise disjoint half-open cells ``[left_k, right_k)``."""

    left: np.ndarray
    right: np.ndarray

    def __init__(self, cells):
        cells = [(float(a), float(b)) for a, b in cells]
        if not cells:
            raise ValueError("a partition needs at least one cell")
        left = np.array([c[0] for c in cells])
        right = np.array([c[1] for c in cells])
        if not np.all(np.isfinite(left)) or not np.all(np.isfinite(right)):
            raise ValueError("cell endpoints must be finite")
        if np.any(right <= left):
            raise ValueError("every cell must have positive length")
        order = np.argsort(left, kind="stable")
        if np.any(left[order][1:] < right[order][:-1]):
            raise ValueError("cells overlap")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def measures(self) -> np.ndarray:
        return self.right - self.left

    @property
    def cells(self):
        return list(zip(self.left.tolist(), self.right.tolist()))

    def __len__(self):
        return len(self.left)

    def __eq__(self, other):
        return (isinstance(other, Partition) and np.array_equal(self.left, other.left)
                and np.array_equal(self.right, other.right))

    def __hash__(self):
        return hash((self.left.tobytes(), self.right.tobytes()))


def uniform_partition(a: float, b: float, n: int) -> Partition:
    """``n`` equal half-open cells covering ``[a, b)``."""
    if not a < b:
        raise ValueError(f"degenerate interval [{a}, {b})")
    if n < 1:
        raise ValueError("n must be >= 1")
    edges = np.linspace(a, b, n + 1)
    edges[0], edges[-1] = a, b
    return Partition(zip(edges[:-1], edges[1:]))


def overlap_matrix(p: Partition, q: Partition) -> np.ndarray:
    """``|p_k intersect q_l|`` for every pair of cells."""
    lo = np.maximum(p.left[:, None], q.left[None, :])
    hi = np.minimum(p.right[:, None], q.right[None, :])
    return np.clip(hi - lo, 0.0, None)


@dataclass(frozen=True)
class StepFunction:
    partition: Partition
    coefficients: np.ndarray

    def __init__(self, partition: Partition, coefficients):
        c = np.asarray(coefficients, dtype=float).ravel()
        if len(c) != len(partition):
            raise ValueError(f"{len(c)} coefficients for {len(partition)} cells")
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "coefficients", c)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a, b, c in zip(self.partition.left, self.partition.right, self.coefficients):
            out[(x >= a) & (x < b)] = c
        return out

    def norm(self, e) -> float:
        """``L^e`` norm against Lebesgue measure."""
        e = as_exponent(e)
        c = np.abs(self.coefficients)
        if e.is_inf:
            return float(c.max())
        return float(np.sum(c ** e.value * self.partition.measures) ** (1.0 / e.value))

    def integrals(self, target: Partition) -> np.ndarray:
        """Integral of the function over each cell of ``target``."""
        return overlap_matrix(target, self.partition) @ self.coefficients


def _containing_cells(fine: Partition, coarse: Partition) -> np.ndarray:
    inside = ((coarse.left[None, :] <= fine.left[:, None])
              & (fine.right[:, None] <= coarse.right[None, :]))
    if not np.all(inside.any(axis=1)):
        bad = int(np.argmin(inside.any(axis=1)))
        raise ValueError(f"cell {fine.cells[bad]} is not contained in any coarse cell")
    return np.argmax(inside, axis=1)


def conditional_expectation(f: StepFunction, coarser: Partition, e=1) -> StepFunction:
    """Average of ``f`` over each cell of ``coarser``.

    ``f`` must live on a refinement of ``coarser`` (checked on endpoints).
    The averaging is the same for every exponent ``e``; it is a norm-one
    projection on each ``L^e``.
    """
    as_exponent(e)
    owner = _containing_cells(f.partition, coarser)
    total = np.zeros(len(coarser))
    np.add.at(total, owner, f.coefficients * f.partition.measures)
    return StepFunction(coarser, total / coarser.measures)


def partition_isometry(f: StepFunction, e) -> np.ndarray:
    """Coefficients weighted by ``|A_i|^(1/e)``; an isometry onto ``l_e^n``."""
    e = as_exponent(e)
    return f.coefficients * f.partition.measures ** e.reciprocal


def partition_isometry_inverse(v, partition: Partition, e) -> StepFunction:
    e = as_exponent(e)
    v = np.asarray(v, dtype=float)
    return StepFunction(partition, v / partition.measures ** e.reciprocal)


# ---------------------------------------------------------------------------
# kernels


@dataclass
class KernelSpec:
    """A bounded kernel ``phi(s, t)`` on ``s_domain x t_domain``.

    Build instances with :func:`signstep_kernel`, :func:`constant_kernel`,
    :func:`product_kernel`, :func:`grid_kernel` or :func:`gaussian_kernel`.
    """

    kind: str
    s_domain: tuple
    t_domain: tuple
    params: dict = field(default_factory=dict)

    def __call__(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, float), np.asarray(t, float))
        if self.kind == "signstep":
            return (s + t >= 0).astype(float)
        if self.kind == "constant":
            return np.full(s.shape, float(self.params["c"]))
        if self.kind == "product":
            return self.params["f"](s) * self.params["g"](t)
        if self.kind == "gaussian":
            sig = self.params["sigma"]
            return np.exp(-((s - t) ** 2) / (2.0 * sig * sig))
        if self.kind == "grid":
            g = self.params["matrix"]
            pa, pb = self.params["s_partition"], self.params["t_partition"]
            out = np.zeros(s.shape)
            for i, (b0, b1) in enumerate(pb.cells):
                for j, (a0, a1) in enumerate(pa.cells):
                    out[(s >= a0) & (s < a1) & (t >= b0) & (t < b1)] = g[i, j]
            return out
        raise ValueError(f"unknown kernel kind {self.kind!r}")

    @property
    def sup_norm_bound(self) -> float:
        if self.kind in ("signstep", "gaussian"):
            return 1.0
        if self.kind == "constant":
            return abs(float(self.params["c"]))
        if self.kind == "product":
            return (np.abs(self.params["f"].coefficients).max()
                    * np.abs(self.params["g"].coefficients).max())
        return float(np.abs(self.params["matrix"]).max())


def _square(domain):
    a, b = (float(x) for x in domain)
    if not a < b:
        raise ValueError(f"degenerate domain [{a}, {b})")
    return (a, b)


def signstep_kernel(domain=(-1.0, 1.0)) -> KernelSpec:
    """``phi(s, t) = 1`` if ``s + t >= 0`` else ``0``."""
    d = _square(domain)
    return KernelSpec("signstep", d, d)


def constant_kernel(c: float, domain=(-1.0, 1.0)) -> KernelSpec:
    d = _square(domain)
    return KernelSpec("constant", d, d, {"c": float(c)})


def gaussian_kernel(sigma: float, domain=(-1.0, 1.0)) -> KernelSpec:
    """``phi(s, t) = exp(-(s - t)^2 / (2 sigma^2))``."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    d = _square(domain)
    return KernelSpec("gaussian", d, d, {"sigma": float(sigma)})


def product_kernel(f: StepFunction, g: StepFunction, s_domain=None, t_domain=None) -> KernelSpec:
    """``phi(s, t) = f(s) g(t)``, zero outside the cells of ``f`` and ``g``."""
    sd = s_domain or (float(f.partition.left.min()), float(f.partition.right.max()))
    td = t_domain or (float(g.partition.left.min()), float(g.partition.right.max()))
    return KernelSpec("product", _square(sd), _square(td), {"f": f, "g": g})


def grid_kernel(matrix, s_partition: Partition, t_partition: Partition) -> KernelSpec:
    """Piecewise constant kernel; ``matrix[i, j]`` is its value on ``A_j x B_i``."""
    g = as_matrix(matrix)
    if g.shape != (len(t_partition), len(s_partition)):
        raise ValueError("grid shape must be (len(t_partition), len(s_partition))")
    sd = (float(s_partition.left.min()), float(s_partition.right.max()))
    td = (float(t_partition.left.min()), float(t_partition.right.max()))
    return KernelSpec("grid", sd, td,
                      {"matrix": g, "s_partition": s_partition, "t_partition": t_partition})


def _clip_halfplane(poly, a, b, c):
    """Sutherland-Hodgman clip of a polygon by ``a s + b t + c >= 0``."""
    out = []
    k = len(poly)
    for idx in range(k):
        p0, p1 = poly[idx], poly[(idx + 1) % k]
        f0 = a * p0[0] + b * p0[1] + c
        f1 = a * p1[0] + b * p1[1] + c
        if f0 >= 0:
            out.append(p0)
        if (f0 >= 0) != (f1 >= 0):
            w = f0 / (f0 - f1)
            out.append((p0[0] + w * (p1[0] - p0[0]), p0[1] + w * (p1[1] - p0[1])))
    return out


def _shoelace(poly) -> float:
    if len(poly) < 3:
        return 0.0
    s = 0.0
    for (x0, y0), (x1, y1) in zip(poly, poly[1:] + poly[:1]):
        s += x0 * y1 - x1 * y0
    return abs(s) / 2.0


def signstep_cell_average(a0, a1, b0, b1) -> float:
    """Exact fraction of ``[a0, a1) x [b0, b1)`` where ``s + t >= 0``."""
    rect = [(a0, b0), (a1, b0), (a1, b1), (a0, b1)]
    return _shoelace(_clip_halfplane(rect, 1.0, 1.0, 0.0)) / ((a1 - a0) * (b1 - b0))


def _check_inside(p: Partition, domain, name):
    lo, hi = domain
    if p.left.min() < lo or p.right.max() > hi:
        raise ValueError(f"{name} partition leaves the kernel domain [{lo}, {hi})")


def discretize_kernel(k: KernelSpec, pa: Partition, pb: Partition, quad_order: int = 16) -> np.ndarray:
    """Cell averages of ``k``: entry ``(i, j)`` averages over ``A_j x B_i``.

    ``pa`` partitions the ``s`` variable (columns), ``pb`` the ``t`` variable
    (rows). Closed-form integration for every kind except ``gaussian``, which
    uses a tensor Gauss-Legendre rule of ``quad_order`` points per axis.
    """
    _check_inside(pa, k.s_domain, "s")
    _check_inside(pb, k.t_domain, "t")
    area = np.outer(pb.measures, pa.measures)
    if k.kind == "signstep":
        out = np.empty((len(pb), len(pa)))
        for i, (b0, b1) in enumerate(pb.cells):
            for j, (a0, a1) in enumerate(pa.cells):
                out[i, j] = signstep_cell_average(a0, a1, b0, b1)
        return out
    if k.kind == "constant":
        return np.full((len(pb), len(pa)), float(k.params["c"]))
    if k.kind == "product":
        fa = k.params["f"].integrals(pa) / pa.measures
        gb = k.params["g"].integrals(pb) / pb.measures
        return np.outer(gb, fa)
    if k.kind == "grid":
        g = k.params["matrix"]
        ov_t = overlap_matrix(pb, k.params["t_partition"])
        ov_s = overlap_matrix(pa, k.params["s_partition"])
        return (ov_t @ g @ ov_s.T) / area
    if k.kind == "gaussian":
        x, w = np.polynomial.legendre.leggauss(quad_order)
        out = np.empty((len(pb), len(pa)))
        for i, (b0, b1) in enumerate(pb.cells):
            t = 0.5 * (b1 - b0) * x + 0.5 * (b1 + b0)
            for j, (a0, a1) in enumerate(pa.cells):
                s = 0.5 * (a1 - a0) * x + 0.5 * (a1 + a0)
                vals = k(s[None, :], t[:, None])
                out[i, j] = 0.25 * (w @ vals @ w)
        return out
    raise ValueError(f"unknown kernel kind {k.kind!r}")


# ---------------------------------------------------------------------------
# coarsening


def _groups_to_owner(groups: Sequence[int], n: int) -> np.ndarray:
    groups = [int(g) for g in groups]
    if any(g < 1 for g in groups) or sum(groups) != n:
        raise ValueError(f"grouping {groups} does not split {n} cells")
    return np.repeat(np.arange(len(groups)), groups)


def merge_partition(p: Partition, groups: Sequence[int]) -> Partition:
    """Merge consecutive cells (in left-endpoint order) into intervals."""
    owner = _groups_to_owner(groups, len(p))
    order = np.argsort(p.left, kind="stable")
    if not np.array_equal(order, np.arange(len(p))):
        raise ValueError("cells must be listed left to right")
    cells = []
    for g in range(owner.max() + 1):
        idx = np.flatnonzero(owner == g)
        if np.any(p.left[idx[1:]] != p.right[idx[:-1]]):
            raise ValueError("merged cells must be adjacent")
        cells.append((p.left[idx[0]], p.right[idx[-1]]))
    return Partition(cells)


def coarsen_matrix(phi, pa_fine: Partition, pb_fine: Partition,
                   col_groups: Sequence[int], row_groups: Sequence[int]) -> np.ndarray:
    """Measure-weighted block averages of a cell-average matrix."""
    phi = as_matrix(phi)
    if phi.shape != (len(pb_fine), len(pa_fine)):
        raise ValueError("phi shape does not match the partitions")
    merge_partition(pa_fine, col_groups)
    merge_partition(pb_fine, row_groups)
    ca = _groups_to_owner(col_groups, len(pa_fine))
    rb = _groups_to_owner(row_groups, len(pb_fine))
    sa = np.zeros((ca.max() + 1, len(pa_fine)))
    sa[ca, np.arange(len(pa_fine))] = pa_fine.measures
    sb = np.zeros((rb.max() + 1, len(pb_fine)))
    sb[rb, np.arange(len(pb_fine))] = pb_fine.measures
    return (sb @ phi @ sa.T) / np.outer(sb.sum(axis=1), sa.sum(axis=1))


def lift_operator(a_coarse, pa_fine: Partition, pb_fine: Partition,
                  col_groups: Sequence[int], row_groups: Sequence[int], pq) -> np.ndarray:
    """Fine matrix acting like ``a_coarse`` on step functions of the merged cells.

    It is ``psi_fine psi_coarse^{-1} a phi_coarse P phi_fine^{-1}`` with ``P`` the
    conditional expectation, hence has the same ``p -> q`` norm as
    ``a_coarse``.
    """
    pq = as_pair(pq)
    a = as_matrix(a_coarse)
    ca = _groups_to_owner(col_groups, len(pa_fine))
    rb = _groups_to_owner(row_groups, len(pb_fine))
    big_a = np.zeros(a.shape[1])
    np.add.at(big_a, ca, pa_fine.measures)
    big_b = np.zeros(a.shape[0])
    np.add.at(big_b, rb, pb_fine.measures)
    col_w = (pa_fine.measures / big_a[ca]) ** pq.p_conj.reciprocal
    row_w = (pb_fine.measures / big_b[rb]) ** pq.q.reciprocal
    return a[np.ix_(rb, ca)] * row_w[:, None] * col_w[None, :]


# ---------------------------------------------------------------------------
# kernel and partition strings


def parse_partition(text: str) -> Partition:
    """``"uniform:<a>:<b>:<n>"``."""
    parts = text.split(":")
    if len(parts) != 4 or parts[0] != "uniform":
        raise ValueError(f"bad partition string {text!r}; expected uniform:<a>:<b>:<n>")
    return uniform_partition(float(parts[1]), float(parts[2]), int(parts[3]))


def parse_kernel(text: str, domain=(-1.0, 1.0),
                 loader: Optional[Callable[[str], np.ndarray]] = None) -> KernelSpec:
    """``"signstep"``, ``"const:<c>"``, ``"gauss:<sigma>"`` or ``"grid:<path>"``.

    A grid kernel spreads the stored matrix over uniform partitions of
    ``domain`` in both variables.
    """
    head, _, rest = text.partition(":")
    if head == "signstep" and not rest:
        return signstep_kernel(domain)
    if head == "const":
        return constant_kernel(float(rest), domain)
    if head == "gauss":
        return gaussian_kernel(float(rest), domain)
    if head == "grid":
        if loader is None:
            from .io import read_matrix as loader
        g = loader(rest)
        a, b = domain
        return grid_kernel(g, uniform_partition(a, b, g.shape[1]), uniform_partition(a, b, g.shape[0]))
    raise ValueError(f"bad kernel string {text!r}")

