"""Reproduction harness: built-in problems, sweeps and the command line."""
from .expr import parse_rhs
from .problems import REGISTRY, example1, example2, problem_from_expr
from .sweeps import SweepRow, accuracy_sweep, stability_sweep
