"""Chebyshev polynomial primitives on [-1, 1].

Evaluation uses the three-term recurrences, which stay valid outside
[-1, 1]. Point sets are the extrema grid (Chebyshev-Lobatto points) in
ascending order. Series coefficients follow the double-prime convention:
the first and last terms of the sum are halved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

__all__ = [
    "NodeSet",
    "ChebyshevSeries",
    "eval_T",
    "eval_U",
    "chebyshev_points",
    "boundary_derivative",
    "boundary_derivative_mp",
    "interp_coeffs",
    "integrate_series",
]


def _recurrence(k, x, first):
    if k < 0:
        raise ValueError(f"degree must be non-negative, got {k}")
    prev = x * 0 + 1
    if k == 0:
        return prev
    cur = first
    for _ in range(1, k):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def eval_T(k: int, x):
    """First-kind Chebyshev polynomial T_k(x).

    `x` may be a scalar, a numpy array or an mpmath number; the recurrence
    is carried out in whatever arithmetic `x` brings along.
    """
    return _recurrence(k, x, x)


def eval_U(k: int, x):
    """Second-kind Chebyshev polynomial U_k(x)."""
    return _recurrence(k, x, 2 * x)


@dataclass(frozen=True)
class NodeSet:
    """Chebyshev points xi[0] = -1 < ... < xi[s-1] = 1."""

    s: int
    xi: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        if xi.shape != (self.s,):
            raise ValueError(f"expected {self.s} points, got shape {xi.shape}")
        if xi[0] != -1.0 or xi[-1] != 1.0:
            raise ValueError("endpoints must be exactly -1 and 1")
        if np.any(np.diff(xi) <= 0):
            raise ValueError("points must be strictly increasing")
        xi.setflags(write=False)
        object.__setattr__(self, "xi", xi)


def _snap_symmetric(x):
    """Make x[i] + x[-1-i] == 0 exactly and pin the endpoints to +-1."""
    n = len(x)
    for i in range(n // 2):
        m = (abs(x[i]) + abs(x[n - 1 - i])) / 2
        x[i], x[n - 1 - i] = -m, m
    if n % 2:
        x[n // 2] = 0 * x[n // 2]
    x[0], x[-1] = -1 + 0 * x[0], 1 + 0 * x[-1]
    return x


def chebyshev_points(s: int) -> NodeSet:
    """The s extrema of T_{s-1}, ascending: xi_i = -cos(i*pi/(s-1)), i = 0..s-1."""
    if s < 2:
        raise ValueError(f"need at least 2 Chebyshev points, got s={s}")
    xi = -np.cos(np.arange(s) * np.pi / (s - 1))
    return NodeSet(s, _snap_symmetric(xi))


def chebyshev_points_mp(s: int, ctx=mpmath.mp) -> list:
    """Extended-precision Chebyshev points in the arithmetic of `ctx`."""
    if s < 2:
        raise ValueError(f"need at least 2 Chebyshev points, got s={s}")
    xi = [-ctx.cos(i * ctx.pi / (s - 1)) for i in range(s)]
    return _snap_symmetric(xi)


def boundary_derivative(s: int, j: int, sign: int) -> float:
    """j-th derivative of T_s at sign = +1 or -1.

    Overflows to inf for large s and j; use :func:`boundary_derivative_mp`
    when that matters.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    out = 1.0
    for k in range(j):
        out *= (s * s - k * k) / (2 * k + 1)
    return out if (s + j) % 2 == 0 or sign == 1 else -out


def boundary_derivative_mp(s: int, j: int, sign: int, ctx=mpmath.mp):
    """Same as :func:`boundary_derivative`, evaluated in `ctx` arithmetic."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    out = ctx.mpf(1)
    for k in range(j):
        out *= ctx.mpf(s * s - k * k) / (2 * k + 1)
    return out if (s + j) % 2 == 0 or sign == 1 else -out


def _halving_weights(n: int) -> np.ndarray:
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    return w


@dataclass(frozen=True)
class ChebyshevSeries:
    """Coefficients beta_0..beta_{n-1} of sum'' beta_k T_k.

    The first and last coefficients are halved when summed. A length-one
    series is halved once, so ``ChebyshevSeries((2.0,))`` is the constant 1.
    """

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a series needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self):
        return len(self.coeffs)

    def plain(self) -> np.ndarray:
        """Coefficients with the halving applied, i.e. ordinary sum a_k T_k."""
        return np.asarray(self.coeffs) * _halving_weights(len(self.coeffs))

    @classmethod
    def from_plain(cls, a) -> "ChebyshevSeries":
        a = np.asarray(a, dtype=float)
        return cls(tuple(a / _halving_weights(len(a))))

    def __call__(self, x):
        return np.polynomial.chebyshev.chebval(x, self.plain())


def interp_coeffs(values: Sequence[float]) -> ChebyshevSeries:
    """Interpolant coefficients from samples at ``chebyshev_points(len(values))``.

    beta_k = 2/(s-1) * sum''_j f(xi_j) T_k(xi_j), evaluated as a direct
    double sum.
    """
    f = np.asarray(values, dtype=float)
    if f.ndim != 1:
        raise ValueError("values must be one-dimensional")
    s = len(f)
    if s < 2:
        raise ValueError("need samples at s >= 2 points")
    xi = chebyshev_points(s).xi
    wf = f * _halving_weights(s)
    beta = [2.0 / (s - 1) * float(np.dot(wf, eval_T(k, xi))) for k in range(s)]
    return ChebyshevSeries(tuple(beta))


def integrate_series(series: ChebyshevSeries) -> ChebyshevSeries:
    """Antiderivative that vanishes at xi = -1, one degree higher."""
    a = series.plain()
    n = len(a)
    out = np.zeros(n + 1)
    for k, ak in enumerate(a):
        if k == 0:
            out[1] += ak
        elif k == 1:
            # x^2/2 = T_2/4 + const; the constant is fixed below
            out[2] += ak / 4
        else:
            out[k + 1] += ak / (2 * (k + 1))
            out[k - 1] -= ak / (2 * (k - 1))
    # T_k(-1) = (-1)^k
    out[0] = -sum(out[k] * (-1) ** k for k in range(1, n + 1))
    return ChebyshevSeries.from_plain(out)
