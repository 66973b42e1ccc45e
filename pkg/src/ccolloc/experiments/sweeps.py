"""Accuracy and stability sweeps, written out as CSV."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..solver import IVProblem, SolverConfig, integrate, terminal_error
from ..stability import a_stability_scan, stability_region_grid
from ..tableau import Family, make_tableau
from .problems import REGISTRY

__all__ = [
    "SweepRow",
    "DEFAULT_S_RANGES",
    "accuracy_sweep",
    "stability_sweep",
    "format_number",
    "accuracy_csv",
    "stability_csv",
    "region_csv",
]

DEFAULT_S_RANGES = {
    Family.NEWTON_COTES: range(2, 41),
    Family.CLENSHAW_CURTIS: range(2, 61),
    Family.GAUSS_LEGENDRE: range(1, 41),
}

_MIN_S = {Family.GAUSS_LEGENDRE: 1, Family.CLENSHAW_CURTIS: 2, Family.NEWTON_COTES: 2}


@dataclass(frozen=True)
class SweepRow:
    family: Family
    s: int
    error: float
    iterations: int
    converged: bool


def format_number(x) -> str:
    """Shortest round-trip decimal; scientific when |x| < 1e-3 or |x| >= 1e6."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0 or 1e-3 <= abs(x) < 1e6:
        return np.format_float_positional(x, unique=True, trim="0")
    return np.format_float_scientific(x, unique=True, trim="0")


def _resolve(problem) -> IVProblem:
    return problem if isinstance(problem, IVProblem) else REGISTRY.get(problem)


def accuracy_sweep(
    problem,
    families: Iterable = (Family.GAUSS_LEGENDRE, Family.CLENSHAW_CURTIS, Family.NEWTON_COTES),
    s_range: Sequence[int] | None = None,
    n_steps: int = 1,
    config: SolverConfig = SolverConfig(),
) -> list:
    """Terminal error for each (family, s).

    Runs that fail to converge are kept with converged=False; their error is
    that of the last iterate, or NaN if the iterate is not finite.
    """
    problem = _resolve(problem)
    rows = []
    for fam in families:
        fam = Family.parse(fam)
        ss = DEFAULT_S_RANGES[fam] if s_range is None else s_range
        for s in ss:
            if s < _MIN_S[fam] or s > 60:
                raise ValueError(f"s={s} outside the supported range for {fam.value}")
            res = integrate(problem, make_tableau(fam, s), n_steps, config, strict=False)
            err = terminal_error(problem, res.y) if np.all(np.isfinite(res.y)) else math.nan
            rows.append(SweepRow(fam, int(s), float(err), int(sum(res.iterations)), res.converged))
    return rows


def stability_sweep(s_min: int, s_max: int, precision_bits: int | None = None, max_workers=None) -> str:
    """CSV text with columns s,min_re,a_stable,precision_bits."""
    return stability_csv(a_stability_scan(s_min, s_max, precision_bits, max_workers))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_number(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def accuracy_csv(rows: Sequence[SweepRow]) -> str:
    return _csv(
        ["family", "s", "error", "iterations", "converged"],
        [(r.family.short, r.s, r.error, r.iterations, r.converged) for r in rows],
    )


def stability_csv(reports) -> str:
    return _csv(
        ["s", "min_re", "a_stable", "precision_bits"],
        [(r.s, r.min_re, r.a_stable, r.precision_bits) for r in reports],
    )


def region_csv(tableau, re_range, im_range, resolution) -> str:
    re, im, vals = stability_region_grid(tableau, re_range, im_range, resolution)
    rows = [(x, y, vals[k, l]) for k, y in enumerate(im) for l, x in enumerate(re)]
    return _csv(["re", "im", "abs_r"], rows)
