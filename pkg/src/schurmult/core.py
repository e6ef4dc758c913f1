"""Exponents, vector norms, Hölder extremizers and entrywise products."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np


class RegimeError(ValueError):
    """Raised when an exponent pair is outside the supported regime."""


class InconsistencyError(RuntimeError):
    """A certified lower bound exceeded a certified upper bound (a bug)."""


@dataclass(frozen=True)
class Exponent:
    """An exponent in ``[1, inf]``.

    Infinity is a distinct state (``value is None``) rather than a float
    sentinel, so every formula has to branch on :attr:`is_inf` explicitly.
    Build instances with :func:`as_exponent` or the :data:`INF` constant.
    """

    value: Union[float, None]

    def __post_init__(self):
        if self.value is not None:
            v = float(self.value)
            if not math.isfinite(v):
                raise ValueError("use Exponent(None) or INF for infinity")
            if v < 1.0:
                raise ValueError(f"exponent must be >= 1, got {v}")
            object.__setattr__(self, "value", v)

    @property
    def is_inf(self) -> bool:
        return self.value is None

    @property
    def reciprocal(self) -> float:
        """``1/e`` with ``1/inf = 0`` exactly."""
        return 0.0 if self.value is None else 1.0 / self.value

    def conjugate(self) -> "Exponent":
        return conjugate(self)

    def __float__(self):
        return math.inf if self.value is None else self.value

    def __str__(self):
        if self.value is None:
            return "inf"
        return f"{self.value:g}"

    def __repr__(self):
        return f"Exponent({self})"


INF = Exponent(None)
ONE = Exponent(1.0)
TWO = Exponent(2.0)

ExponentLike = Union[Exponent, float, int, str]


def as_exponent(e: ExponentLike) -> Exponent:
    """Coerce a float, int, ``"inf"`` string or :class:`Exponent`."""
    if isinstance(e, Exponent):
        return e
    if isinstance(e, str):
        s = e.strip().lower()
        if s in ("inf", "infinity", "oo", "∞"):
            return INF
        e = float(s)
    v = float(e)
    if math.isinf(v) and v > 0:
        return INF
    return Exponent(v)


def conjugate(e: ExponentLike) -> Exponent:
    """Conjugate exponent ``e'`` with ``1/e + 1/e' = 1`` (``1 <-> inf``)."""
    e = as_exponent(e)
    if e.is_inf:
        return ONE
    if e.value == 1.0:
        return INF
    return Exponent(e.value / (e.value - 1.0))


@dataclass(frozen=True)
class ExponentPair:
    """The pair ``(p, q)`` for operators ``l_p^n -> l_q^m``."""

    p: Exponent
    q: Exponent

    def __init__(self, p: ExponentLike, q: ExponentLike):
        object.__setattr__(self, "p", as_exponent(p))
        object.__setattr__(self, "q", as_exponent(q))

    @property
    def regime(self) -> bool:
        """True iff ``q <= p``, the standing hypothesis for multiplier norms."""
        return self.q.reciprocal >= self.p.reciprocal

    @property
    def p_conj(self) -> Exponent:
        return conjugate(self.p)

    @property
    def q_conj(self) -> Exponent:
        return conjugate(self.q)

    def require_regime(self):
        if not self.regime:
            raise RegimeError(
                f"multiplier norms require q <= p, got p={self.p}, q={self.q}")

    def __str__(self):
        return f"({self.p}, {self.q})"


def as_pair(pq) -> ExponentPair:
    if isinstance(pq, ExponentPair):
        return pq
    p, q = pq
    return ExponentPair(p, q)


def lp_norm(x, e: ExponentLike) -> float:
    """``(sum |x_i|^e)^(1/e)``, or ``max |x_i|`` for ``e = inf``."""
    e = as_exponent(e)
    a = np.abs(np.asarray(x, dtype=float)).ravel()
    if a.size == 0:
        return 0.0
    if e.is_inf:
        return float(a.max())
    if e.value == 1.0:
        return float(a.sum())
    if e.value == 2.0:
        return float(np.sqrt(np.dot(a, a)))
    scale = a.max()
    if scale == 0.0:
        return 0.0
    # rescale to avoid overflow for large exponents
    return float(scale * np.sum((a / scale) ** e.value) ** (1.0 / e.value))


def holder_extremizer(x, e: ExponentLike) -> np.ndarray:
    """Unit vector of the dual ball attaining ``<x*, x> = ||x||_e``.

    The result has ``||x*||_{e'} = 1`` for ``x != 0``. For ``e = 1`` this is
    the full sign vector (zeros kept); for ``e = inf`` it is the signed
    indicator of the first coordinate of maximal modulus. ``x = 0`` maps to 0.
    """
    e = as_exponent(e)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    a = np.abs(x)
    if a.size == 0 or not a.any():
        return out
    if e.is_inf:
        k = int(np.argmax(a))
        out.flat[k] = np.sign(x.flat[k])
        return out
    if e.value == 1.0:
        return np.sign(x)
    scale = a.max()
    w = (a / scale) ** (e.value - 1.0)
    w /= lp_norm(w, conjugate(e))
    return np.sign(x) * w


def signed_power(x, e: ExponentLike) -> np.ndarray:
    """``sign(x_i) |x_i|^(e-1)``, the gradient direction of ``||x||_e^e / e``."""
    e = as_exponent(e)
    x = np.asarray(x, dtype=float)
    if e.is_inf:
        return holder_extremizer(x, e)
    return np.sign(x) * np.abs(x) ** (e.value - 1.0)


def hadamard(m, a) -> np.ndarray:
    """Entrywise (Schur) product ``m o a``; the action of ``T_m`` on ``a``."""
    m = np.asarray(m, dtype=float)
    a = np.asarray(a, dtype=float)
    if m.shape != a.shape:
        raise ValueError(f"incompatible shapes {m.shape} and {a.shape}")
    return m * a


def as_matrix(a) -> np.ndarray:
    """Validate a dense finite 2-D real matrix with at least one entry."""
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a
