"""Linear stability of collocation methods.

The stability function r(z) = 1 + z b^T (I - zA)^{-1} 1 can be evaluated
for any tableau by a complex linear solve. For Clenshaw-Curtis collocation
it is also available in closed form as N(z)/D(z), with D(z) = N(-z); the
method is A-stable exactly when every root of D lies in the open right
half-plane. Those roots are located with an Aberth-Ehrlich iteration in
mpmath arithmetic and cross-checked by repeating at doubled precision.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Union

import mpmath
import numpy as np

from .tableau import ButcherTableau

__all__ = [
    "DEFAULT_PRECISION_BITS",
    "StabilityRational",
    "StabilityReport",
    "RootCertificationFailure",
    "PoleOnNegativeAxis",
    "default_precision_bits",
    "stability_function_value",
    "cc_stability_polys",
    "aberth_roots",
    "min_real_part_of_D_roots",
    "a_stability_scan",
    "a0_sample",
    "stability_region_grid",
]

DEFAULT_PRECISION_BITS = 256
PRECISION_ENV = "COLLOC_PRECISION_BITS"


class RootCertificationFailure(ArithmeticError):
    """Roots could not be certified at the requested precision."""

    def __init__(self, message, s=None):
        super().__init__(message)
        self.s = s


class PoleOnNegativeAxis(ArithmeticError):
    """r(z) has a pole on the negative real axis, so the method is not A0-stable."""


def default_precision_bits() -> int:
    """DEFAULT_PRECISION_BITS unless overridden by $COLLOC_PRECISION_BITS."""
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return DEFAULT_PRECISION_BITS
    try:
        bits = int(raw)
    except ValueError:
        raise ValueError(f"{PRECISION_ENV}={raw!r} is not an integer") from None
    if bits < 128:
        raise ValueError(f"{PRECISION_ENV} must be at least 128, got {bits}")
    return bits


def _ctx(bits):
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


def stability_function_value(tableau: ButcherTableau, z: complex) -> complex:
    """r(z) by a complex linear solve; complex infinity at a pole."""
    s = tableau.s
    M = np.eye(s, dtype=complex) - z * tableau.A
    try:
        if np.linalg.cond(M) > 1e14:
            return complex(np.inf, np.inf)
        x = np.linalg.solve(M, np.ones(s, dtype=complex))
    except np.linalg.LinAlgError:
        return complex(np.inf, np.inf)
    return complex(1 + z * (tableau.b @ x))


@dataclass(frozen=True)
class StabilityRational:
    """r(z) = N(z)/D(z), coefficients ascending in z, held in mpmath numbers."""

    s: int
    num: tuple
    den: tuple
    precision_bits: int

    @property
    def ctx(self):
        return _ctx(self.precision_bits)

    def __call__(self, z) -> complex:
        ctx = self.ctx
        z = ctx.mpmathify(z)
        n = ctx.polyval(list(reversed(self.num)), z)
        d = ctx.polyval(list(reversed(self.den)), z)
        if d == 0:
            return complex(np.inf, np.inf)
        return complex(n / d)

    def den_roots(self, maxsteps: int = 500) -> list:
        return aberth_roots(self.den, self.ctx, maxsteps=maxsteps)


def _cc_d(s, ctx):
    """d_j = M^{(s-j)}(1), j = 0..s-1, for the Clenshaw-Curtis node polynomial.

    With m = s - j, the m-th derivative of (x^2 - 1) T'_{s-1}(x) at x = 1 is
    m(m-1) T_{s-1}^{(m-1)}(1) + 2m T_{s-1}^{(m)}(1), and the map to [0, 1]
    contributes 2^m / (2^{2s-2} (s-1) s!).
    """
    n2 = (s - 1) ** 2
    # P[m] = T_{s-1}^{(m)}(1) = prod_{k<m} ((s-1)^2 - k^2)/(2k+1)
    P = [ctx.mpf(1)]
    for k in range(s):
        P.append(P[-1] * ctx.mpf(n2 - k * k) / (2 * k + 1))
    pref = 1 / (ctx.mpf(2) ** (2 * s - 2) * (s - 1) * ctx.factorial(s))
    d = []
    for j in range(s):
        m = s - j
        d.append(pref * ctx.mpf(2) ** m * m * ((m - 1) * P[m - 1] + 2 * P[m]))
    return d


def cc_stability_polys(s: int, precision_bits: int | None = None) -> StabilityRational:
    """N and D for s-node Clenshaw-Curtis collocation.

    N(z) = sum d_j z^j and D(z) = sum (-1)^j d_j z^j. d_0 = M^{(s)} = 1, so
    r(0) = 1 with no further normalisation.
    """
    if s < 2:
        raise ValueError(f"Clenshaw-Curtis collocation needs s >= 2, got {s}")
    bits = default_precision_bits() if precision_bits is None else precision_bits
    if bits < 128:
        raise ValueError("precision_bits must be at least 128")
    d = _cc_d(s, _ctx(bits))
    return StabilityRational(s, tuple(d), tuple(x if j % 2 == 0 else -x for j, x in enumerate(d)), bits)


def aberth_roots(coeffs: Sequence, ctx=mpmath.mp, maxsteps: int = 500) -> list:
    """All roots of sum coeffs[k] z^k by Aberth-Ehrlich simultaneous iteration.

    Each root is certified by a residual test: |p(z)| must be below
    2^(32 - prec) * sum |coeffs[k]| |z|^k. Raises RootCertificationFailure
    otherwise.
    """
    a = [ctx.mpc(x) for x in coeffs]
    while a and a[-1] == 0:
        a.pop()
    n = len(a) - 1
    if n < 1:
        return []
    desc = list(reversed(a))
    ddesc = [c * (n - k) for k, c in enumerate(desc[:-1])]
    absdesc = [abs(c) for c in desc]

    # initial points on a circle of radius |a0/an|^(1/n), off the axes
    radius = abs(a[0] / a[n]) ** (ctx.mpf(1) / n) if a[0] != 0 else ctx.mpf(1)
    z = [radius * ctx.expjpi(ctx.mpf(2 * k) / n + ctx.mpf(1) / (2 * n) + ctx.mpf("0.1")) for k in range(n)]
    tiny = ctx.mpf(2) ** (-ctx.prec + 8)
    stop_scale = ctx.mpf(2) ** (16 - ctx.prec)
    done = [False] * n
    for _ in range(maxsteps):
        moved = False
        for i in range(n):
            if done[i]:
                continue
            zi = z[i]
            p = ctx.polyval(desc, zi)
            if abs(p) <= stop_scale * ctx.polyval(absdesc, abs(zi)):
                done[i] = True
                continue
            ratio = p / ctx.polyval(ddesc, zi)
            repulse = ctx.fsum(1 / (zi - z[k]) for k in range(n) if k != i)
            step = ratio / (1 - ratio * repulse)
            z[i] = zi - step
            if abs(step) <= tiny * max(abs(z[i]), 1):
                done[i] = True
            else:
                moved = True
        if not moved:
            break

    if not all(done):
        raise RootCertificationFailure(f"Aberth iteration did not settle in {maxsteps} sweeps")
    bound_scale = ctx.mpf(2) ** (32 - ctx.prec)
    for zi in z:
        resid = abs(ctx.polyval(desc, zi))
        bound = bound_scale * ctx.polyval(absdesc, abs(zi))
        if not resid <= bound:
            raise RootCertificationFailure(
                f"root {mpmath.nstr(zi, 10)} has residual {mpmath.nstr(resid, 5)} "
                f"above bound {mpmath.nstr(bound, 5)} at {ctx.prec} bits"
            )
    return z


@dataclass(frozen=True)
class StabilityReport:
    s: int
    min_re: float
    a_stable: bool
    precision_bits: int


def _min_re(s, bits):
    roots = cc_stability_polys(s, bits).den_roots()
    return min(r.real for r in roots)


def min_real_part_of_D_roots(s: int, precision_bits: int | None = None, rtol: float = 1e-6) -> StabilityReport:
    """Smallest real part among the roots of D for s-node Clenshaw-Curtis.

    The computation is repeated at twice the precision; disagreement beyond
    `rtol` (relative) raises RootCertificationFailure.
    """
    if s < 2:
        raise ValueError(f"Clenshaw-Curtis collocation needs s >= 2, got {s}")
    bits = default_precision_bits() if precision_bits is None else precision_bits
    try:
        lo = _min_re(s, bits)
        hi = _min_re(s, 2 * bits)
    except RootCertificationFailure as exc:
        raise RootCertificationFailure(f"s={s}: {exc}", s) from exc
    if abs(lo - hi) > rtol * abs(hi):
        raise RootCertificationFailure(
            f"s={s}: min real part {mpmath.nstr(lo, 12)} at {bits} bits vs "
            f"{mpmath.nstr(hi, 12)} at {2 * bits} bits", s
        )
    return StabilityReport(s, float(hi), bool(hi > 0), bits)


def a_stability_scan(
    s_min: int, s_max: int, precision_bits: int | None = None, max_workers: int | None = None
) -> list:
    """One :class:`StabilityReport` per s in s_min..s_max, in order of s.

    ``max_workers > 1`` spreads the per-s root finding over processes.
    """
    if not 2 <= s_min <= s_max:
        raise ValueError(f"need 2 <= s_min <= s_max, got {s_min}, {s_max}")
    bits = default_precision_bits() if precision_bits is None else precision_bits
    ss = list(range(s_min, s_max + 1))
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers) as pool:
            return list(pool.map(min_real_part_of_D_roots, ss, [bits] * len(ss)))
    return [min_real_part_of_D_roots(s, bits) for s in ss]


def a0_sample(method: Union[ButcherTableau, StabilityRational], x_values: Sequence[float]) -> np.ndarray:
    """|r(x)| at negative real x."""
    xs = np.asarray(x_values, dtype=float)
    if np.any(xs >= 0):
        raise ValueError("sample points must be negative")
    if isinstance(method, ButcherTableau):
        vals = [stability_function_value(method, complex(x)) for x in xs]
    else:
        vals = [method(float(x)) for x in xs]
    out = np.abs(np.array(vals))
    if not np.all(np.isfinite(out)):
        bad = xs[~np.isfinite(out)]
        raise PoleOnNegativeAxis(f"stability function has a pole at x = {bad[0]:g}")
    return out


def stability_region_grid(
    tableau: ButcherTableau,
    re_range: tuple,
    im_range: tuple,
    resolution: int | tuple = 101,
):
    """|r(z)| on a rectangular grid.

    Returns ``(re, im, abs_r)`` where abs_r[k, l] belongs to im[k], re[l]
    (row-major, imaginary part outer). Poles come out as NaN.
    """
    nre, nim = (resolution, resolution) if np.isscalar(resolution) else resolution
    if nre < 1 or nim < 1:
        raise ValueError("resolution must be positive")
    re = np.linspace(re_range[0], re_range[1], int(nre))
    im = np.linspace(im_range[0], im_range[1], int(nim))
    out = np.empty((len(im), len(re)))
    for k, y in enumerate(im):
        for l, x in enumerate(re):
            v = abs(stability_function_value(tableau, complex(x, y)))
            out[k, l] = v if np.isfinite(v) else np.nan
    return re, im, out
