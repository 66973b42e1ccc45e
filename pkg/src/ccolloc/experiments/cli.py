"""Command line front end.

Exit status: 0 on success, 1 for bad input, 2 when a numerical step fails
(stage iteration not converging, roots not certified).
"""
from __future__ import annotations

import argparse
import sys

from ..solver import IVProblem, NonConvergence, SolverConfig, Strategy, integrate, terminal_error
from ..stability import PoleOnNegativeAxis, RootCertificationFailure, default_precision_bits
from ..tableau import CollocationKernel, Family, make_tableau, order_of
from .expr import ExprSyntaxError
from .problems import REGISTRY, problem_from_expr
from .sweeps import accuracy_csv, accuracy_sweep, format_number, region_csv, stability_sweep

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _family(text):
    try:
        return Family.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ccolloc", description="Collocation Runge-Kutta toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("tableau", help="print or export a Butcher tableau")
    t.add_argument("--family", type=_family, required=True)
    t.add_argument("--s", type=int, required=True)
    t.add_argument("--json", action="store_true")

    s = sub.add_parser("solve", help="integrate a problem")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--problem", choices=REGISTRY.names())
    src.add_argument("--rhs", help="scalar right-hand side in t and y, e.g. '2*y/t^3'")
    s.add_argument("--t0", type=float)
    s.add_argument("--y0", type=float)
    s.add_argument("--tf", type=float)
    s.add_argument("--family", type=_family, default=Family.CLENSHAW_CURTIS)
    s.add_argument("--s", type=int, default=5)
    s.add_argument("--steps", type=int, default=1)
    s.add_argument("--strategy", choices=[x.value for x in Strategy], default=Strategy.FIXED_POINT.value)
    s.add_argument("--tol", type=float, default=1e-14)
    s.add_argument("--max-iter", type=int, default=100)

    sw = sub.add_parser("sweep", help="accuracy or stability sweeps as CSV")
    swsub = sw.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    acc = swsub.add_parser("accuracy")
    acc.add_argument("--problem", default="example1")
    acc.add_argument("--families", default="gl,cc,nc", help="comma separated subset of cc,gl,nc")
    acc.add_argument("--s-min", type=int)
    acc.add_argument("--s-max", type=int)
    acc.add_argument("--steps", type=int, default=1)
    acc.add_argument("--out")
    st = swsub.add_parser("stability")
    st.add_argument("--s-min", type=int, default=2)
    st.add_argument("--s-max", type=int, default=78)
    st.add_argument("--bits", type=int, help="mantissa bits (default: $COLLOC_PRECISION_BITS or 256)")
    st.add_argument("--out")

    r = sub.add_parser("region", help="|r(z)| on a grid as CSV")
    r.add_argument("--family", type=_family, required=True)
    r.add_argument("--s", type=int, required=True)
    r.add_argument("--re-min", type=float, default=-5.0)
    r.add_argument("--re-max", type=float, default=5.0)
    r.add_argument("--im-min", type=float, default=-5.0)
    r.add_argument("--im-max", type=float, default=5.0)
    r.add_argument("--resolution", type=int, default=101)
    r.add_argument("--out")

    o = sub.add_parser("order", help="order from the node-polynomial moments")
    o.add_argument("--family", type=_family, required=True)
    o.add_argument("--s", type=int, required=True)
    return p


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_tableau(args):
    tab = make_tableau(args.family, args.s)
    print(tab.to_json() if args.json else tab)


def _cmd_solve(args):
    if args.problem:
        if args.t0 is not None or args.y0 is not None:
            raise ValueError("--t0/--y0 only apply to --rhs problems")
        base = REGISTRY.get(args.problem)
        problem = base
        if args.tf is not None:
            problem = IVProblem(base.f, base.t0, base.y0, args.tf, base.exact, base.name)
    else:
        if args.t0 is None or args.y0 is None or args.tf is None:
            raise ValueError("--rhs needs --t0, --y0 and --tf")
        problem = problem_from_expr(args.rhs, args.t0, args.y0, args.tf)
    config = SolverConfig(args.tol, args.max_iter, Strategy(args.strategy))
    res = integrate(problem, make_tableau(args.family, args.s), args.steps, config)
    print(f"t = {format_number(res.t)}")
    print("y = " + " ".join(format_number(v) for v in res.y))
    print(f"iterations = {sum(res.iterations)}")
    if problem.exact is not None:
        print(f"error = {format_number(terminal_error(problem, res.y))}")


def _cmd_sweep(args):
    if args.kind == "accuracy":
        fams = [Family.parse(f) for f in args.families.split(",") if f.strip()]
        s_range = None
        if args.s_min is not None or args.s_max is not None:
            lo = args.s_min if args.s_min is not None else 2
            hi = args.s_max if args.s_max is not None else lo
            s_range = range(lo, hi + 1)
        rows = accuracy_sweep(args.problem, fams, s_range, args.steps)
        _emit(accuracy_csv(rows), args.out)
    else:
        bits = args.bits if args.bits is not None else default_precision_bits()
        _emit(stability_sweep(args.s_min, args.s_max, bits), args.out)


def _cmd_region(args):
    tab = make_tableau(args.family, args.s)
    text = region_csv(tab, (args.re_min, args.re_max), (args.im_min, args.im_max), args.resolution)
    _emit(text, args.out)


def _cmd_order(args):
    rep = order_of(CollocationKernel.for_family(args.family, args.s))
    print(f"family = {args.family.value}")
    print(f"s = {rep.s}")
    print(f"m = {rep.m}")
    print(f"order = {rep.order}")
    print("moments = " + " ".join(format_number(m) for m in rep.moments))


_COMMANDS = {
    "tableau": _cmd_tableau,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "region": _cmd_region,
    "order": _cmd_order,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _COMMANDS[args.command](args)
    except (NonConvergence, RootCertificationFailure, PoleOnNegativeAxis) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError, KeyError, ExprSyntaxError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
