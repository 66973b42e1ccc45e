"""Named initial value problems, including the two accuracy test cases."""
from __future__ import annotations

import numpy as np

from ..solver import IVProblem
from .expr import parse_rhs

__all__ = ["ProblemRegistry", "REGISTRY", "example1", "example2", "problem_from_expr"]


def _exp_rhs(t, y):
    return y


def _exp_exact(t):
    return np.array([np.exp(t)])


def _ex2_rhs(t, y):
    return 2 * y / t**3


def _ex2_exact(t):
    return np.array([np.exp(1 - 1 / t**2)])


# y' = y on [0, 1]
example1 = IVProblem(_exp_rhs, 0.0, np.array([1.0]), 1.0, _exp_exact, "example1")

# y' = 2y/t^3 is singular at t = 0, and exp(1 - 1/t^2) equals 1 at t = 1,
# so the problem is posed on [1, 3].
example2 = IVProblem(_ex2_rhs, 1.0, np.array([1.0]), 3.0, _ex2_exact, "example2")


class ProblemRegistry:
    """Name -> IVProblem lookup. Built-in entries cannot be replaced."""

    def __init__(self, builtins=()):
        self._builtin = {p.name: p for p in builtins}
        self._user = {}

    def register(self, problem: IVProblem) -> None:
        if problem.name in self._builtin or problem.name in self._user:
            raise ValueError(f"problem {problem.name!r} is already registered")
        self._user[problem.name] = problem

    def get(self, name: str) -> IVProblem:
        try:
            return self._builtin.get(name) or self._user[name]
        except KeyError:
            raise KeyError(f"unknown problem {name!r}; known: {', '.join(self.names())}") from None

    def names(self) -> list:
        return sorted({**self._builtin, **self._user})

    def __contains__(self, name):
        return name in self._builtin or name in self._user


REGISTRY = ProblemRegistry([example1, example2])


def problem_from_expr(text: str, t0: float, y0: float, tf: float, name: str | None = None) -> IVProblem:
    """Scalar problem y' = <text> with no exact solution attached."""
    node = parse_rhs(text)

    def rhs(t, y):
        return np.array([node.eval(t, float(y[0]))])

    return IVProblem(rhs, float(t0), np.array([float(y0)]), float(tf), None, name or text)
