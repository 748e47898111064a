"""Command-line front end: verification, evaluation, convergence, bound
checks, and kernel-mass tables.  CSV is the primary output (headers always
present, 17 significant digits, '.' decimal separator); figures are
optional renderings of the same data.

Function specs are builtin names (e0..e4, abs-half, hat@0.4, sqrt, pow-1,
two-kink, step-deriv@1/3) or an inline piecewise definition with rational
coefficients:

    piecewise: 0, p(x)=1/2 - x, 1/2, p(x)=x - 1/2, 1

breakpoints are rationals ("1/2", "0.25"); each piece is a polynomial in
x, terms joined by + or -, each term "c", "c*x", or "c*x^k" ("**" also
accepted for powers).

n lists: "16,32,64" (comma list), "3..15" (inclusive range), "16..512x2"
(geometric ladder).

Exit codes: 0 success, 1 usage error, 2 verification mismatch (or strict
bound violation), 3 numerical failure.  Sweeps honor the DURRBEZ_THREADS
environment variable (integer >= 1).
"""

import argparse
import csv
import io
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .analysis import (
    BoundReport,
    LipParams,
    bv_rhs,
    dt_modulus,
    fit_rate,
    lip_bound,
    reports_to_csv,
    sup_error,
)
from .exact import verify_moment_identities
from .functions import parse_function_spec
from .modified import CONFIGS, SignedPowerWarning
from .operators import OperatorParams, QuadratureError, apply_modified_bezier_grid, kappa

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_NUMERICAL = 3

TAIL_BOUND_C = 2.5


class UsageError(ValueError):
    pass


def _fmt(v):
    return "%.17g" % v


def parse_n_list(spec):
    """Parse the n-list grammar: comma list, a..b range, a..bxq ladder."""
    spec = spec.strip()
    if ".." in spec:
        lo_s, rest = spec.split("..", 1)
        if "x" in rest:
            hi_s, q_s = rest.split("x", 1)
            lo, hi, q = int(lo_s), int(hi_s), int(q_s)
            if lo < 1 or hi < lo or q < 2:
                raise UsageError("bad geometric n ladder %r" % spec)
            out = []
            v = lo
            while v <= hi:
                out.append(v)
                v *= q
            return out
        lo, hi = int(lo_s), int(rest)
        if hi < lo:
            raise UsageError("bad n range %r" % spec)
        return list(range(lo, hi + 1))
    try:
        return [int(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError as err:
        raise UsageError("bad n list %r" % spec) from err


def _workers():
    raw = os.environ.get("DURRBEZ_THREADS", "1")
    try:
        w = int(raw)
    except ValueError:
        raise UsageError("DURRBEZ_THREADS must be an integer >= 1, got %r" % raw)
    if w < 1:
        raise UsageError("DURRBEZ_THREADS must be >= 1, got %d" % w)
    return w


def _map_ordered(fn, items):
    """Apply fn over items, optionally threaded, preserving input order."""
    workers = _workers()
    if workers == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _write_output(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _csv_from_rows(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Subcommands


def cmd_verify(args):
    if ".." not in args.n:
        raise UsageError("verify expects an n range like 3..15")
    lo_s, hi_s = args.n.split("..", 1)
    lo, hi = int(lo_s), int(hi_s)
    if not 3 <= lo <= hi <= 60:
        raise UsageError("verify range must satisfy 3 <= from <= to <= 60")
    cfg = CONFIGS[args.config]
    report = verify_moment_identities(lo, hi, cfg)
    _write_output(report.to_csv(), args.out)
    print(report.to_text(), end="", file=sys.stderr)
    return EXIT_OK if report.all_identities_ok else EXIT_MISMATCH


def cmd_eval(args):
    f = parse_function_spec(args.f)
    params = OperatorParams(n=args.n, mu=args.mu)
    if args.grid < 2:
        raise UsageError("grid must be >= 2")
    xs = np.linspace(0.0, 1.0, args.grid)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SignedPowerWarning)
        dvals = apply_modified_bezier_grid(f, params, xs)
    fvals = np.asarray(f.evaluator(xs), dtype=float)
    rows = [
        [_fmt(x), _fmt(fv), _fmt(dv), _fmt(dv - fv)]
        for x, fv, dv in zip(xs, fvals, dvals)
    ]
    _write_output(_csv_from_rows(["x", "fx", "dvalue", "error"], rows), args.out)
    if args.plot:
        from . import plots

        plots.save_eval_plot(args.plot, xs, fvals, dvals, title="%s, n=%d, mu=%g" % (f.name, args.n, args.mu))
    return EXIT_OK


def cmd_converge(args):
    f = parse_function_spec(args.f)
    ns = parse_n_list(args.n)
    if len(ns) < 3:
        raise UsageError("converge needs at least 3 values of n")

    def one(n):
        params = OperatorParams(n=n, mu=args.mu)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SignedPowerWarning)
            err = sup_error(f, params, args.grid)
        mod = dt_modulus(f, 1.0 / math.sqrt(n + 2))
        c = math.inf if mod == 0.0 and err > 1e-13 else (0.0 if mod == 0.0 else err / mod)
        return n, err, mod, c

    results = _map_ordered(one, ns)
    rows = [[str(n), _fmt(e), _fmt(m), _fmt(c)] for n, e, m, c in results]
    _write_output(
        _csv_from_rows(["n", "sup_error", "modulus", "empirical_C"], rows), args.out
    )
    errs = [e for _, e, _, _ in results]
    if max(errs) < 1e-10:
        print("slope: not-meaningful (errors below 1e-10)", file=sys.stderr)
        fit = None
    else:
        slope, intercept, r2 = fit_rate([(n, e) for n, e, _, _ in results])
        print("slope=%.6g intercept=%.6g r2=%.6g" % (slope, intercept, r2), file=sys.stderr)
        fit = (slope, intercept)
    if args.plot:
        from . import plots

        plots.save_convergence_plot(
            args.plot, ns, errs, fit=fit, title="%s, mu=%g" % (f.name, args.mu)
        )
    return EXIT_OK


def _bounds_direct(args, f):
    ns = parse_n_list(args.n)
    reports = []
    raw = []

    def one(n):
        params = OperatorParams(n=n, mu=args.mu)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SignedPowerWarning)
            err = sup_error(f, params, args.grid)
        mod = dt_modulus(f, 1.0 / math.sqrt(n + 2))
        c = math.inf if mod == 0.0 and err > 1e-13 else (0.0 if mod == 0.0 else err / mod)
        return n, err, mod, c

    raw = _map_ordered(one, ns)
    calibrated = max((c for _, _, _, c in raw if math.isfinite(c)), default=0.0)
    for n, err, mod, c in raw:
        reports.append(
            BoundReport(
                function=f.name, n=n, mu=args.mu, x=None, variant="direct",
                lhs=err, rhs=calibrated * mod,
                flags="empirical_C=%s" % _fmt(c),
            )
        )
    return reports


def _bounds_lip(args, f):
    ns = parse_n_list(args.n)
    lip = LipParams(zeta=args.zeta, alpha1=args.alpha1, alpha2=args.alpha2, M_constant=args.M)
    reports = []
    for n in ns:
        params = OperatorParams(n=n, mu=args.mu)
        for x in args.x:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", SignedPowerWarning)
                rep = lip_bound(f, lip, params, x)
            if any(issubclass(w.category, SignedPowerWarning) for w in caught):
                rep = BoundReport(
                    rep.function, rep.n, rep.mu, rep.x, rep.variant,
                    rep.lhs, rep.rhs, flags="signed-power",
                )
            reports.append(rep)
    return reports


def _bounds_bv(args, f):
    if f.structure is None:
        raise UsageError("bounds bv requires a structured (piecewise) function")
    ns = parse_n_list(args.n)
    variants = ["statement", "proof"] if args.variant == "both" else [args.variant]
    reports = []
    for n in ns:
        params = OperatorParams(n=n, mu=args.mu)
        for x in args.x:
            for variant in variants:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", SignedPowerWarning)
                    reports.append(bv_rhs(f, params, x, variant))
    return reports


def cmd_bounds(args):
    f = parse_function_spec(args.f)
    if args.kind == "direct":
        reports = _bounds_direct(args, f)
    elif args.kind == "lip":
        reports = _bounds_lip(args, f)
    else:
        reports = _bounds_bv(args, f)
    _write_output(reports_to_csv(reports), args.out)
    if args.strict and any(r.slack < 0 for r in reports):
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_kappa(args):
    if not 0 < args.x < 1:
        raise UsageError("x must lie in (0, 1)")
    params = OperatorParams(n=args.n, mu=args.mu)
    ys = np.linspace(0.0, 1.0, args.y_grid)
    rows = []
    kappas = []
    lefts = []
    rights = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SignedPowerWarning)
        for y in ys:
            kval = kappa(params, args.x, y)
            kappas.append(kval)
            left = right = ""
            bl = br = math.nan
            if 0 < y < args.x:
                bl = TAIL_BOUND_C * args.mu * args.x * (1 - args.x) / (args.n * (args.x - y) ** 2)
                left = _fmt(bl)
            elif args.x < y < 1:
                br = TAIL_BOUND_C * args.mu * args.x * (1 - args.x) / (args.n * (y - args.x) ** 2)
                right = _fmt(br)
            lefts.append(bl)
            rights.append(br)
            rows.append([_fmt(y), _fmt(kval), left, right])
    _write_output(
        _csv_from_rows(["y", "kappa", "tail_bound_left", "tail_bound_right"], rows),
        args.out,
    )
    if args.plot:
        from . import plots

        plots.save_kappa_plot(
            args.plot, ys, kappas, lefts, rights,
            title="n=%d, mu=%g, x=%g" % (args.n, args.mu, args.x),
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="durrbez",
        description="Modified Bernstein-Durrmeyer operators: verification and experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="exact verification of the moment identities")
    p.add_argument("--n", required=True, help="degree range, e.g. 3..15")
    p.add_argument("--config", default="default", choices=sorted(CONFIGS))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="tabulate operator values on a grid")
    p.add_argument("--f", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--out", default=None)
    p.add_argument("--plot", default=None, help="write a figure (format by extension)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("converge", help="error ladder with fitted log-log rate")
    p.add_argument("--f", required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--n", required=True, help="n list, e.g. 16,32,64 or 16..512x2")
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--out", default=None)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("bounds", help="compare measured errors against theorem bounds")
    p.add_argument("kind", choices=["direct", "lip", "bv"])
    p.add_argument("--f", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--x", type=float, nargs="+", default=[0.5])
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--zeta", type=float, default=0.5)
    p.add_argument("--alpha1", type=float, default=0.0)
    p.add_argument("--alpha2", type=float, default=1.0)
    p.add_argument("--M", type=float, default=1.0, help="Lipschitz class constant")
    p.add_argument("--variant", default="both", choices=["statement", "proof", "both"])
    p.add_argument("--strict", action="store_true",
                   help="exit 2 when any bound is violated")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("kappa", help="cumulative kernel mass with tail bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y-grid", type=int, default=101)
    p.add_argument("--out", default=None)
    p.add_argument("--plot", default=None)
    p.set_defaults(func=cmd_kappa)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as err:
        print("numerical failure: %s" % err, file=sys.stderr)
        return EXIT_NUMERICAL


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
