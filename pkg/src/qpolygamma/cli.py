"""Command-line front end: ``qpg {eval,table,verify,bounds}``.

Exit codes: 0 success, 1 a verification case failed, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .base import Branch, Certified, SeriesPolicy, classify
from .errors import QGammaError
from .qcore import log_q_gamma, q_digamma, q_polygamma
from .theorems import (
    Theorem2Kind,
    batir_function,
    classical_theorem1_value,
    digamma_bounds,
    lower_gap,
    remark2_value,
    theorem1_value,
    theorem2_value,
    upper_gap,
)
from .verify import DEFAULT_GRID, PROBE_THRESHOLD, GridSpec, Spacing, run_suite

FUNCTIONS = ("loggamma", "digamma", "polygamma", "theorem1", "phi", "varphi",
             "phi_sub", "theta", "remark2", "batir")
SUITE_CHOICES = ("cm", "monotone", "sandwich", "identities", "proof", "classical", "derivatives", "all")
TABLE_HEADER = ("q", "x", "value", "err_bound", "terms")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt_num(v: float) -> str:
    return "%.17g" % v


def evaluator(fn: str, p, policy: SeriesPolicy, m: int = 1):
    """Return x -> Certified for the named function at parameter p."""
    if fn == "loggamma":
        return lambda x: log_q_gamma(p, x, policy)
    if fn == "digamma":
        return lambda x: q_digamma(p, x, policy)
    if fn == "polygamma":
        return lambda x: q_polygamma(p, m, x, policy)
    if fn == "theorem1":
        if p.branch is Branch.CLASSICAL:
            return classical_theorem1_value
        return lambda x: theorem1_value(p, x, policy)
    if fn in ("phi", "varphi", "phi_sub", "theta"):
        kind = Theorem2Kind(fn)
        return lambda x: theorem2_value(kind, p, x, policy)
    if fn == "remark2":
        return lambda x: remark2_value(p, x, policy)
    if fn == "batir":
        return batir_function
    raise UsageError(f"unknown function {fn!r}")


def _rows(fn, p, xs, policy, m):
    f = evaluator(fn, p, policy, m)
    out = []
    for x in xs:
        c: Certified = f(x)
        out.append((p.q, x, c.value, c.err_bound, c.terms_used))
    return out


def _render(header, rows, fmt: str) -> str:
    if fmt == "json":
        recs = [dict(zip(header, r)) for r in rows]
        return json.dumps(recs, indent=2, allow_nan=False) + "\n"
    cells = [[fmt_num(v) if isinstance(v, float) else str(v) for v in r] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(cells)
        return buf.getvalue()
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def emit_table(fn: str, p, grid: GridSpec, policy: SeriesPolicy, fmt: str = "csv", m: int = 1) -> str:
    """One row ``q,x,value,err_bound,terms`` per grid point."""
    p = classify(p.q if hasattr(p, "q") else p)
    return _render(TABLE_HEADER, _rows(fn, p, grid.points(), policy, m), fmt)


def _policy(args) -> SeriesPolicy:
    try:
        return SeriesPolicy(rel_tol=args.rel_tol, max_terms=args.max_terms)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _grid(args, default_log: bool) -> GridSpec:
    log = default_log if args.log is None else args.log
    return GridSpec(args.xmin, args.xmax, args.n, Spacing.LOG if log else Spacing.LINEAR)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qpg", description="Certified q-gamma / q-polygamma evaluation and checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt_default):
        sp.add_argument("--q", type=float, required=True)
        sp.add_argument("--rel-tol", type=float, default=SeriesPolicy.rel_tol)
        sp.add_argument("--max-terms", type=int, default=SeriesPolicy.max_terms)
        sp.add_argument("--format", choices=("csv", "json", "plain"), default=fmt_default)
        sp.add_argument("--out", help="write output to this file instead of stdout")

    def grid_flags(sp, xmin, xmax, n):
        sp.add_argument("--xmin", type=float, default=xmin)
        sp.add_argument("--xmax", type=float, default=xmax)
        sp.add_argument("--n", type=int, default=n)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--log", dest="log", action="store_true", default=None)
        g.add_argument("--linear", dest="log", action="store_false")

    ev = sub.add_parser("eval", help="evaluate one function at one x")
    common(ev, "csv")
    ev.add_argument("--fn", choices=FUNCTIONS, required=True)
    ev.add_argument("--m", type=int, default=1)
    ev.add_argument("--x", type=float, required=True)

    tb = sub.add_parser("table", help="tabulate a function over a grid")
    common(tb, "csv")
    tb.add_argument("--fn", choices=FUNCTIONS, required=True)
    tb.add_argument("--m", type=int, default=1)
    grid_flags(tb, 0.5, 5.0, 10)

    vf = sub.add_parser("verify", help="run a verification suite")
    common(vf, "json")
    vf.add_argument("--suite", choices=SUITE_CHOICES, default="all")
    vf.add_argument("--k-max", type=int, default=4)
    vf.add_argument("--probe-threshold", type=float, default=PROBE_THRESHOLD)
    grid_flags(vf, DEFAULT_GRID.x_min, DEFAULT_GRID.x_max, DEFAULT_GRID.n_points)

    bd = sub.add_parser("bounds", help="print the double bounds for psi_q")
    common(bd, "plain")
    bd.add_argument("--x", type=float)
    grid_flags(bd, 0.5, 5.0, 10)
    return parser


def _cmd_verify(args) -> tuple[str, int]:
    p = classify(args.q)
    report = run_suite(args.suite, p, _grid(args, True), _policy(args), args.k_max, args.probe_threshold)
    if args.format == "json":
        text = report.to_json() + "\n"
    else:
        rows = [(c.label, c.q, c.x, c.margin, c.err_budget, c.passed) for c in report.cases]
        text = _render(("label", "q", "x", "margin", "err_budget", "pass"), rows, args.format)
        if args.format == "plain":
            text += f"suite={report.suite_name} passed={report.passed} worst_margin={fmt_num(report.worst_margin)}\n"
    return text, 0 if report.passed else 1


def _cmd_bounds(args) -> tuple[str, int]:
    p = classify(args.q)
    policy = _policy(args)
    xs = [args.x] if args.x is not None else _grid(args, False).points()
    psi1 = q_digamma(p, 1.0, policy)
    rows = []
    for x in xs:
        b = digamma_bounds(p, x, policy, psi1)
        v = q_digamma(p, x, policy).value
        rows.append((p.q, x, b.lower, v, b.upper,
                     lower_gap(p, x, policy, psi1).value, upper_gap(p, x, policy).value))
    header = ("q", "x", "lower", "value", "upper", "lower_margin", "upper_margin")
    return _render(header, rows, args.format), 0


def run(argv=None) -> int:
    """Parse ``argv`` and execute; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        if args.command == "eval":
            p = classify(args.q)
            text, code = _render(TABLE_HEADER, _rows(args.fn, p, [args.x], _policy(args), args.m), args.format), 0
        elif args.command == "table":
            text, code = emit_table(args.fn, classify(args.q), _grid(args, False), _policy(args),
                                    args.format, args.m), 0
        elif args.command == "verify":
            text, code = _cmd_verify(args)
        else:
            text, code = _cmd_bounds(args)
    except UsageError as exc:
        print(f"qpg: usage error: {exc}", file=sys.stderr)
        return 2
    except (QGammaError, ValueError, OverflowError) as exc:
        print(f"qpg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
