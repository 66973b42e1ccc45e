"""Fixed-step implicit Runge-Kutta integration.

Each step solves the stage equations

    Y_i = y_n + h * sum_j a_ij f(t_n + c_j h, Y_j)

either by successive substitution or by a simplified Newton iteration with
the Jacobian frozen at the start of the step, then advances with the
weights b.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .tableau import ButcherTableau

__all__ = [
    "IVProblem",
    "Strategy",
    "SolverConfig",
    "StepResult",
    "IntegrationResult",
    "NonConvergence",
    "ErrorFloorError",
    "irk_step",
    "integrate",
    "terminal_error",
    "estimate_order",
]


class NonConvergence(RuntimeError):
    """The stage iteration hit max_iter with the residual above tolerance."""

    def __init__(self, residual, iterations, result=None, step=None):
        self.residual = residual
        self.iterations = iterations
        self.result = result
        self.step = step
        where = "" if step is None else f" at step {step}"
        super().__init__(
            f"stage iteration did not converge{where}: residual {residual:.3e} "
            f"after {iterations} iterations"
        )


class ErrorFloorError(ValueError):
    """Errors are too close to rounding level for a meaningful fit."""


def _as_state(y) -> np.ndarray:
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.ndim != 1 or y.size < 1:
        raise ValueError("state must be a non-empty vector")
    return y


@dataclass(frozen=True)
class IVProblem:
    """y' = f(t, y), y(t0) = y0 on [t0, tf]; `f` returns an array like y0."""

    f: Callable
    t0: float
    y0: np.ndarray
    tf: float
    exact: Optional[Callable] = None
    name: str = "problem"

    def __post_init__(self):
        y0 = _as_state(self.y0)
        object.__setattr__(self, "y0", y0)
        if not self.tf > self.t0:
            raise ValueError(f"need tf > t0, got t0={self.t0}, tf={self.tf}")
        if self.exact is not None:
            gap = np.max(np.abs(_as_state(self.exact(self.t0)) - y0))
            if gap > 1e-12:
                raise ValueError(f"exact solution misses y0 by {gap:.3e}")

    @property
    def dim(self) -> int:
        return self.y0.size


class Strategy(str, enum.Enum):
    FIXED_POINT = "fixed_point"
    SIMPLIFIED_NEWTON = "simplified_newton"


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-14
    max_iter: int = 100
    strategy: Strategy = Strategy.FIXED_POINT
    jacobian: Optional[Callable] = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        object.__setattr__(self, "strategy", Strategy(self.strategy))


@dataclass
class StepResult:
    y_next: np.ndarray
    stages: np.ndarray
    iterations: int
    converged: bool
    residual: float


@dataclass
class IntegrationResult:
    y: np.ndarray
    t: float
    iterations: list = field(default_factory=list)
    converged: bool = True


def _fd_jacobian(f, t, y):
    f0 = np.asarray(f(t, y), dtype=float)
    J = np.empty((f0.size, y.size))
    for k in range(y.size):
        dy = math.sqrt(np.finfo(float).eps) * (1 + abs(y[k]))
        yp = y.copy()
        yp[k] += dy
        J[:, k] = (np.asarray(f(t, yp), dtype=float) - f0) / dy
    return J


def _stage_rhs(f, tn, h, c, Y):
    return np.array([np.asarray(f(tn + ci * h, Yi), dtype=float).reshape(-1) for ci, Yi in zip(c, Y)])


def irk_step(
    tableau: ButcherTableau,
    f: Callable,
    tn: float,
    yn,
    h: float,
    config: SolverConfig = SolverConfig(),
    strict: bool = True,
) -> StepResult:
    """Advance one step of size h from (tn, yn).

    The residual is the max-norm stage defect divided by 1 + |yn|. With
    ``strict=False`` a non-converged step returns its last iterate instead of
    raising.
    """
    if not h > 0:
        raise ValueError("step size must be positive")
    yn = _as_state(yn)
    A, b, c = tableau.A, tableau.b, tableau.c
    s, d = tableau.s, yn.size
    scale = 1 + np.max(np.abs(yn))
    Y = np.tile(yn, (s, 1))
    residual = math.inf

    if config.strategy is Strategy.SIMPLIFIED_NEWTON:
        J = config.jacobian(tn, yn) if config.jacobian else _fd_jacobian(f, tn, yn)
        J = np.atleast_2d(np.asarray(J, dtype=float))
        M = np.eye(s * d) - h * np.kron(A, J)

    it = 0
    for it in range(1, config.max_iter + 1):
        F = _stage_rhs(f, tn, h, c, Y)
        defect = Y - yn - h * (A @ F)
        residual = float(np.max(np.abs(defect))) / scale
        if not np.isfinite(residual):
            break
        if config.strategy is Strategy.FIXED_POINT:
            Y = Y - defect
        else:
            Y = Y - np.linalg.solve(M, defect.reshape(-1)).reshape(s, d)
        if residual <= config.tol:
            break

    converged = bool(residual <= config.tol)
    F = _stage_rhs(f, tn, h, c, Y)
    result = StepResult(yn + h * (b @ F), Y, it, converged, residual)
    if strict and not converged:
        raise NonConvergence(residual, it, result)
    return result


def integrate(
    problem: IVProblem,
    tableau: ButcherTableau,
    n_steps: int = 1,
    config: SolverConfig = SolverConfig(),
    strict: bool = True,
) -> IntegrationResult:
    """Take n_steps equal steps from t0 to tf.

    With ``strict=True`` a failed step raises :class:`NonConvergence` tagged
    with its step index; otherwise the run carries on from the unconverged
    iterate and the result is flagged.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    h = (problem.tf - problem.t0) / n_steps
    y = problem.y0.copy()
    out = IntegrationResult(y, problem.t0)
    for n in range(n_steps):
        tn = problem.t0 + n * h
        try:
            step = irk_step(tableau, problem.f, tn, y, h, config, strict=strict)
        except NonConvergence as exc:
            exc.step = n
            exc.args = (f"{exc.args[0]} (step {n})",)
            raise
        y = step.y_next
        out.iterations.append(step.iterations)
        out.converged = out.converged and step.converged
    out.y, out.t = y, problem.tf
    return out


def terminal_error(problem: IVProblem, y_final) -> float:
    """Max-norm distance between y_final and the exact solution at tf."""
    if problem.exact is None:
        raise ValueError(f"problem {problem.name!r} has no exact solution")
    return float(np.max(np.abs(_as_state(y_final) - _as_state(problem.exact(problem.tf)))))


def estimate_order(
    tableau: ButcherTableau,
    problem: IVProblem,
    step_counts: Sequence[int],
    config: SolverConfig = SolverConfig(),
) -> float:
    """Least-squares slope of log(error) against log(h)."""
    if len(step_counts) < 3:
        raise ValueError("need at least three step counts")
    floor = 100 * np.finfo(float).eps * (1 + np.max(np.abs(_as_state(problem.exact(problem.tf)))))
    hs, errs = [], []
    for n in step_counts:
        res = integrate(problem, tableau, n, config)
        err = terminal_error(problem, res.y)
        if err <= floor:
            raise ErrorFloorError(f"error {err:.3e} at n={n} is at the rounding floor")
        hs.append((problem.tf - problem.t0) / n)
        errs.append(err)
    slope, _ = np.polyfit(np.log(hs), np.log(errs), 1)
    return float(slope)
