"""Butcher tableaus for collocation methods and their accuracy order.

Three node families are supported: Clenshaw-Curtis (Chebyshev points
mapped to [0, 1]), Gauss-Legendre and Newton-Cotes (equispaced). The
Clenshaw-Curtis tableau has a closed form built from cosine sums; every
family can also be built by integrating Lagrange polynomials, which is the
reference path used to check the closed form.

All construction happens in mpmath arithmetic. Results are rounded to
double precision only when the :class:`ButcherTableau` is assembled.
"""
from __future__ import annotations

import enum
import functools
import json
import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from .chebyshev import chebyshev_points_mp

__all__ = [
    "Family",
    "ButcherTableau",
    "CollocationKernel",
    "OrderReport",
    "cc_tableau",
    "collocation_tableau",
    "gl_tableau",
    "nc_tableau",
    "make_tableau",
    "gauss_legendre_nodes",
    "newton_cotes_nodes",
    "cc_nodes",
    "order_of",
]


class Family(str, enum.Enum):
    CLENSHAW_CURTIS = "ClenshawCurtis"
    GAUSS_LEGENDRE = "GaussLegendre"
    NEWTON_COTES = "NewtonCotes"
    CUSTOM = "Custom"

    @classmethod
    def parse(cls, name: str) -> "Family":
        """Accept either the full tag or the short cc/gl/nc alias."""
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        aliases = {"cc": cls.CLENSHAW_CURTIS, "gl": cls.GAUSS_LEGENDRE, "nc": cls.NEWTON_COTES}
        if key in aliases:
            return aliases[key]
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown family {name!r}")

    @property
    def short(self) -> str:
        return {"ClenshawCurtis": "cc", "GaussLegendre": "gl", "NewtonCotes": "nc"}.get(
            self.value, "custom"
        )


_SYMMETRIC = (Family.CLENSHAW_CURTIS, Family.GAUSS_LEGENDRE, Family.NEWTON_COTES)
_ENDPOINT = (Family.CLENSHAW_CURTIS, Family.NEWTON_COTES)


@dataclass(frozen=True)
class ButcherTableau:
    """Coefficients (A, b, c) of an s-stage Runge-Kutta method."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    family: Family = Family.CUSTOM

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        b = np.array(self.b, dtype=float)
        c = np.array(self.c, dtype=float)
        s = len(c)
        if s < 1 or A.shape != (s, s) or b.shape != (s,):
            raise ValueError(f"inconsistent shapes A{A.shape}, b{b.shape}, c{c.shape}")
        for arr in (A, b, c):
            arr.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "family", Family.parse(self.family))

    @property
    def s(self) -> int:
        return len(self.c)

    def check(self, tol: float = 1e-13) -> None:
        """Raise ValueError if a structural invariant fails at tolerance `tol`."""
        c, b, A, s = self.c, self.b, self.A, self.s
        problems = []
        if np.any(np.diff(c) <= 0):
            problems.append("nodes not strictly increasing")
        if abs(b.sum() - 1) > tol:
            problems.append(f"sum(b) - 1 = {b.sum() - 1:.3e}")
        rows = np.abs(A.sum(axis=1) - c).max()
        if rows > tol:
            problems.append(f"row sums differ from c by {rows:.3e}")
        if self.family in _SYMMETRIC:
            dc = np.abs(c + c[::-1] - 1).max()
            db = np.abs(b - b[::-1]).max()
            if dc > tol or db > tol:
                problems.append(f"asymmetric nodes/weights ({dc:.3e}, {db:.3e})")
        if self.family in _ENDPOINT:
            if c[0] != 0.0 or c[-1] != 1.0:
                problems.append("endpoint nodes are not exactly 0 and 1")
            if not np.array_equal(b, A[s - 1]):
                problems.append("b differs from the last row of A")
        if problems:
            raise ValueError(f"{self.family.value} s={s}: " + "; ".join(problems))

    def to_json(self) -> str:
        def fmt(x):
            return format(float(x), ".17e")

        return json.dumps(
            {
                "s": self.s,
                "family": self.family.value,
                "c": [fmt(x) for x in self.c],
                "b": [fmt(x) for x in self.b],
                "A": [[fmt(x) for x in row] for row in self.A],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "ButcherTableau":
        data = json.loads(text)
        tab = cls(
            A=[[float(x) for x in row] for row in data["A"]],
            b=[float(x) for x in data["b"]],
            c=[float(x) for x in data["c"]],
            family=Family.parse(data.get("family", "Custom")),
        )
        if tab.s != int(data["s"]):
            raise ValueError(f"field s={data['s']} disagrees with {tab.s} nodes")
        return tab

    def __str__(self):
        lines = []
        for i in range(self.s):
            row = "  ".join(f"{x: .16f}" for x in self.A[i])
            lines.append(f"{self.c[i]: .16f} | {row}")
        lines.append("-" * len(lines[0]))
        lines.append(" " * 19 + "| " + "  ".join(f"{x: .16f}" for x in self.b))
        return "\n".join(lines)


def _ctx(dps: int):
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


def _work_dps(s: int) -> int:
    # equispaced Lagrange bases lose about s/2 digits to cancellation
    return 40 + s


def _to_tableau(A, b, c, family) -> ButcherTableau:
    A = np.array([[float(x) for x in row] for row in A])
    c = np.array([float(x) for x in c])
    b = A[-1].copy() if family in _ENDPOINT else np.array([float(x) for x in b])
    return ButcherTableau(A, b, c, family)


# --- node sets -----------------------------------------------------------

def _cc_nodes_mp(s, ctx):
    return [(1 + x) / 2 for x in chebyshev_points_mp(s, ctx)]


def cc_nodes(s: int) -> np.ndarray:
    """Clenshaw-Curtis nodes c_i = (1 - cos((i-1) pi/(s-1)))/2 on [0, 1]."""
    if s < 2:
        raise ValueError(f"Clenshaw-Curtis nodes need s >= 2, got {s}")
    return np.array([float(x) for x in _cc_nodes_mp(s, _ctx(30))])


def _legendre(n, x):
    """P_n(x) and P_n'(x) from the three-term recurrence."""
    p0, p1 = x * 0 + 1, x
    if n == 0:
        return p0, x * 0
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    dp = n * (x * p1 - p0) / (x * x - 1)
    return p1, dp


def _gl_roots(s, one, cos, pi, eps, max_iter=100):
    """Damped Newton on P_s from the Chebyshev-angle initial guesses.

    Returns the positive half of the roots in descending order; symmetry
    supplies the rest.
    """
    roots = []
    for k in range(1, s // 2 + 1):
        x = cos(pi * (4 * k - 1) / (4 * s + 2)) * one
        for _ in range(max_iter):
            p, dp = _legendre(s, x)
            step = p / dp
            lam = one
            # halve the step until the residual decreases
            while lam > 1e-8:
                x_new = x - lam * step
                if abs(_legendre(s, x_new)[0]) <= abs(p):
                    break
                lam /= 2
            x = x_new
            if abs(step) <= eps * (1 + abs(x)):
                break
        else:
            raise ArithmeticError(f"Legendre root {k} of degree {s} did not converge")
        roots.append(x)
    return roots


def _gl_nodes_mp(s, ctx):
    half = _gl_roots(s, ctx.mpf(1), ctx.cos, ctx.pi, ctx.eps * 4)
    mid = [ctx.mpf(0)] if s % 2 else []
    xs = [-x for x in half] + mid + half[::-1]
    return [(1 + x) / 2 for x in xs]


def gauss_legendre_nodes(s: int) -> np.ndarray:
    """Zeros of the degree-s Legendre polynomial, shifted to (0, 1).

    Newton iteration runs in double precision; the nodes are symmetric about
    1/2 by construction.
    """
    if s < 1:
        raise ValueError(f"Gauss-Legendre nodes need s >= 1, got {s}")
    half = np.array(_gl_roots(s, 1.0, math.cos, math.pi, 2.0**-50), dtype=float)
    mid = [0.0] if s % 2 else []
    x = np.concatenate([-half, mid, half[::-1]])
    c = (1 + x) / 2
    c[s // 2 + s % 2:] = 1 - c[: s // 2][::-1]
    return c


def _nc_nodes_mp(s, ctx):
    return [ctx.mpf(i) / (s - 1) for i in range(s)]


def newton_cotes_nodes(s: int) -> np.ndarray:
    """Equispaced nodes (i-1)/(s-1), i = 1..s."""
    if s < 2:
        raise ValueError(f"Newton-Cotes nodes need s >= 2, got {s}")
    return np.arange(s) / (s - 1)


# --- tableau construction ------------------------------------------------

def _lagrange_integrals(nodes, ctx):
    """a_ij = int_0^{c_i} l_j and b_j = int_0^1 l_j in ctx arithmetic.

    Each integrand has degree s-1, so an s-point Gauss-Legendre rule on
    [0, c_i] is exact. The basis is evaluated in barycentric product form,
    never expanded into monomials.
    """
    s = len(nodes)
    if len(set(nodes)) != s:
        raise ValueError("collocation nodes must be distinct")
    w = []
    for j in range(s):
        prod = ctx.mpf(1)
        for k in range(s):
            if k != j:
                prod *= nodes[j] - nodes[k]
        w.append(1 / prod)
    gx = [2 * x - 1 for x in _gl_nodes_mp(s, ctx)]
    gw = [2 / ((1 - x * x) * _legendre(s, x)[1] ** 2) for x in gx]

    def integrate_to(upper):
        acc = [ctx.mpf(0)] * s
        for x, wq in zip(gx, gw):
            t = upper * (x + 1) / 2
            diffs = [t - cj for cj in nodes]
            if any(d == 0 for d in diffs):
                vals = [ctx.mpf(d == 0) for d in diffs]
            else:
                ell = ctx.fprod(diffs)
                vals = [ell * wj / d for wj, d in zip(w, diffs)]
            for j in range(s):
                acc[j] += wq * vals[j]
        return [a * upper / 2 for a in acc]

    A = [integrate_to(ci) for ci in nodes]
    b = integrate_to(ctx.mpf(1))
    return A, b


def collocation_tableau(nodes: Sequence[float], family: Family | str = Family.CUSTOM) -> ButcherTableau:
    """Collocation tableau for arbitrary distinct nodes in [0, 1].

    The nodes are taken at face value (as doubles); the Lagrange integrals
    are evaluated exactly in extended precision and rounded at the end.
    """
    nodes = [float(x) for x in nodes]
    if any(b <= a for a, b in zip(nodes, nodes[1:])):
        if len(set(nodes)) != len(nodes):
            raise ValueError("collocation nodes must be distinct")
        raise ValueError("collocation nodes must be sorted ascending")
    family = Family.parse(family)
    ctx = _ctx(_work_dps(len(nodes)))
    A, b = _lagrange_integrals([ctx.mpf(x) for x in nodes], ctx)
    return _to_tableau(A, b, nodes, family)


def _cc_closed_form(s, ctx):
    """Clenshaw-Curtis A matrix from the cosine-sum closed form.

    With theta_i = (i-1) pi/(s-1), the cosine sums integrate the
    interpolant from -1 up to cos(theta_i), i.e. over the descending node
    ordering; the result is reflected back onto ascending nodes at the end.
    Boundary columns carry the 1/2 from the double-prime interpolant sum.
    """
    pi, cos = ctx.pi, ctx.cos
    theta = [i * pi / (s - 1) for i in range(s)]
    I = []
    for th in theta:
        row = [1 + cos(th), (cos(2 * th) - 1) / 4]
        for k in range(2, s):
            sgn = (-1) ** k
            row.append(
                (cos((k + 1) * th) + sgn) / (2 * (k + 1))
                - (cos((k - 1) * th) + sgn) / (2 * (k - 1))
            )
        I.append(row[:s])
    half = [ctx.mpf(1) / 2 if k in (0, s - 1) else ctx.mpf(1) for k in range(s)]
    A = [[ctx.mpf(0)] * s for _ in range(s)]
    for j in range(s):
        ck = [half[k] * cos(k * j * pi / (s - 1)) for k in range(s)]
        scale = half[j] / (s - 1)
        for i in range(s):
            A[s - 1 - i][s - 1 - j] = scale * ctx.fdot(ck, I[i])
    return A


@functools.lru_cache(maxsize=None)
def cc_tableau(s: int) -> ButcherTableau:
    """s-node Clenshaw-Curtis collocation tableau from the closed form."""
    if s < 2:
        raise ValueError(f"Clenshaw-Curtis collocation needs s >= 2, got {s}")
    ctx = _ctx(_work_dps(s))
    A = _cc_closed_form(s, ctx)
    return _to_tableau(A, A[-1], _cc_nodes_mp(s, ctx), Family.CLENSHAW_CURTIS)


@functools.lru_cache(maxsize=None)
def gl_tableau(s: int) -> ButcherTableau:
    if s < 1:
        raise ValueError(f"Gauss-Legendre collocation needs s >= 1, got {s}")
    ctx = _ctx(_work_dps(s))
    nodes = _gl_nodes_mp(s, ctx)
    A, b = _lagrange_integrals(nodes, ctx)
    tab = _to_tableau(A, b, nodes, Family.GAUSS_LEGENDRE)
    # exact symmetry of the rounded nodes and weights
    c, b = tab.c.copy(), tab.b.copy()
    h = s // 2
    c[s - h:] = 1 - c[:h][::-1]
    b[s - h:] = b[:h][::-1]
    return ButcherTableau(tab.A, b, c, Family.GAUSS_LEGENDRE)


@functools.lru_cache(maxsize=None)
def nc_tableau(s: int) -> ButcherTableau:
    if s < 2:
        raise ValueError(f"Newton-Cotes collocation needs s >= 2, got {s}")
    ctx = _ctx(_work_dps(s))
    nodes = _nc_nodes_mp(s, ctx)
    A, b = _lagrange_integrals(nodes, ctx)
    return _to_tableau(A, b, nodes, Family.NEWTON_COTES)


def make_tableau(family: Family | str, s: int) -> ButcherTableau:
    family = Family.parse(family)
    builders = {
        Family.CLENSHAW_CURTIS: cc_tableau,
        Family.GAUSS_LEGENDRE: gl_tableau,
        Family.NEWTON_COTES: nc_tableau,
    }
    if family not in builders:
        raise ValueError(f"no built-in node set for family {family.value}")
    return builders[family](s)


# --- order analysis ------------------------------------------------------

@dataclass(frozen=True)
class CollocationKernel:
    """Node polynomial M_s(t) = prod(t - c_i) / s! in ascending monomial form."""

    s: int
    coeffs: tuple
    ctx: object

    @classmethod
    def from_nodes(cls, nodes, dps: int = 60) -> "CollocationKernel":
        ctx = _ctx(dps)
        nodes = [ctx.mpf(x) for x in nodes]
        p = [ctx.mpf(1)]
        for ci in nodes:
            q = [ctx.mpf(0)] * (len(p) + 1)
            for k, a in enumerate(p):
                q[k + 1] += a
                q[k] -= ci * a
            p = q
        fact = ctx.factorial(len(nodes))
        return cls(len(nodes), tuple(a / fact for a in p), ctx)

    @classmethod
    def for_family(cls, family: Family | str, s: int, dps: int = 60) -> "CollocationKernel":
        """Kernel with the nodes themselves computed at `dps` digits."""
        family = Family.parse(family)
        ctx = _ctx(dps)
        node_fn = {
            Family.CLENSHAW_CURTIS: _cc_nodes_mp,
            Family.GAUSS_LEGENDRE: _gl_nodes_mp,
            Family.NEWTON_COTES: _nc_nodes_mp,
        }[family]
        return cls.from_nodes(node_fn(s, ctx), dps)

    def __call__(self, t):
        return self.ctx.polyval(list(reversed(self.coeffs)), t)

    def moment(self, j: int):
        """Exact integral of M_s(t) t^j over [0, 1]."""
        return self.ctx.fsum(a / (k + j + 1) for k, a in enumerate(self.coeffs))

    def _moment_scale(self, j: int):
        return self.ctx.fsum(abs(a) / (k + j + 1) for k, a in enumerate(self.coeffs))


@dataclass(frozen=True)
class OrderReport:
    s: int
    m: int
    order: int
    moments: tuple


def order_of(kernel: CollocationKernel, rtol: float = 1e-12) -> OrderReport:
    """Order s + m, with m the number of leading moments of M_s that vanish.

    A moment counts as zero when it is below `rtol` times the sum of the
    absolute values of its terms.
    """
    moments, m = [], 0
    counting = True
    for j in range(kernel.s):
        mom = kernel.moment(j)
        moments.append(float(mom))
        if counting and abs(mom) <= rtol * kernel._moment_scale(j):
            m += 1
        else:
            counting = False
    return OrderReport(kernel.s, m, kernel.s + m, tuple(moments))
