"""Command-line front end: ``wmock <subcommand> ...`` with JSON on standard output.

Exit codes: 0 success, 1 computational error (structured error JSON on stdout),
2 usage error.  Real numbers are emitted as decimal strings with a fixed digit
count so that re-serialising parsed output is byte-identical.
"""

import argparse
import json
import math
import sys
from fractions import Fraction

import mpmath as mp

from . import DEFAULT_PRECISION, __version__, configure_precision

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_USAGE = 2

MIN_SERIES_TERMS = 16


class UsageError(Exception):
    pass


def dumps(obj):
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _noise():
    return mp.mpf(2) ** (-(mp.mp.prec // 2))


def fmt_real(x, digits):
    x = mp.mpmathify(x)
    if isinstance(x, mp.mpc):
        x = x.real
    if abs(x) < _noise():
        return "0"
    return mp.nstr(x, digits, min_fixed=-4, max_fixed=digits + 1, strip_zeros=False)


def fmt_number(x, digits):
    """Exact rationals as 'p/q' strings, integers as ints, reals and complexes as decimal strings."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (mp.mpc, complex)):
        x = mp.mpc(x)
        if abs(x.imag) <= max(mp.mpf(10) ** (-digits) * abs(x), _noise()):
            return fmt_real(x.real, digits)
        return {"re": fmt_real(x.real, digits), "im": fmt_real(x.imag, digits)}
    return fmt_real(x, digits)


def digits_for(err):
    """Significant digits justified by an absolute error bound on an O(1) quantity."""
    if err <= 0:
        return 15
    return max(1, min(15, int(-math.log10(err))))


def _int_list(text, name):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{name} must be a comma-separated list of integers") from None


def _curve(args):
    from .curves import EllipticCurveQ, named_curve

    if args.label:
        try:
            return named_curve(args.label)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    if not args.curve:
        raise UsageError("give --curve a1,a2,a3,a4,a6 with --conductor N, or --label")
    ainvs = _int_list(args.curve, "--curve")
    if len(ainvs) != 5:
        raise UsageError("--curve needs exactly five a-invariants")
    if args.conductor is None:
        raise UsageError("--conductor is required with --curve")
    try:
        E = EllipticCurveQ(ainvs, args.conductor)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for label in ("11a1", "37a1", "361a1"):
        known = named_curve(label)
        if known.ainvs == E.ainvs and known.conductor == E.conductor:
            return known
    return E


def _curve_json(E):
    return {"ainvs": [fmt_number(Fraction(a), 0) for a in E.ainvs], "conductor": E.conductor, "label": E.label}


# --- subcommands -----------------------------------------------------------------


def cmd_mockform(args):
    from .arith import is_squarefree
    from .mock import cusp_expansion, mock_form, omega_q, zhat_plus_series

    E = _curve(args)
    if args.terms < 1:
        raise UsageError("--terms must be positive")
    digits = args.digits
    n_series = max(args.terms, MIN_SERIES_TERMS)
    pkg = mock_form(E)
    series = zhat_plus_series(E, n_series)
    lat = pkg.lattice
    out = {
        "curve": _curve_json(E),
        "S": fmt_number(pkg.S, digits),
        "S_rational": fmt_number(pkg.S_exact, digits) if pkg.S_exact is not None else None,
        "completion_coefficient": fmt_number(pkg.completion_coefficient, digits),
        "periods": {"omega1": fmt_number(lat.omega1, digits), "omega2": fmt_number(lat.omega2, digits)},
        "zhat_plus": {str(n): fmt_number(series[n], digits) for n in range(-1, args.terms + 1)},
        "exact": series.exact,
    }
    if is_squarefree(E.conductor):
        al = {}
        N = E.conductor
        for Q in (d for d in range(2, N + 1) if N % d == 0 and math.gcd(d, N // d) == 1):
            ce = cusp_expansion(E, Q, 1)
            al[str(Q)] = {
                "lambda": ce.lam,
                "omega": fmt_number(omega_q(E, Q), digits),
                "constant_term": fmt_number(ce.constant_term, digits),
            }
        out["atkin_lehner"] = al
    return out


def cmd_padic(args):
    from .hecke import padic_congruence_check, s_p_digits

    E = _curve(args)
    if args.max_n < 1 or args.target_t < 0:
        raise UsageError("--max-n must be positive and --target-t non-negative")
    constant = None
    if args.constant is not None:
        try:
            constant = Fraction(args.constant)
        except ValueError:
            raise UsageError("--constant must be a rational like -2 or 7/3") from None
    rows = []
    for n in range(1, args.max_n + 1):
        t = min(n, args.target_t)
        r = padic_congruence_check(E, args.p, n, t, args.window, constant)
        lead = dict(list(r.witness.items())[: args.show])
        rows.append({
            "n": n,
            "t": t,
            "constant": fmt_number(r.constant, 0),
            "c_n": fmt_number(r.c_n, 0),
            "min_valuation": r.min_valuation if r.min_valuation != float("inf") else None,
            "window": [-args.p**n, r.witness.precision_exponent - 1],
            "passed": r.passed,
            "leading_terms": {str(k): fmt_number(v, 0) for k, v in lead.items()},
        })
    out = {"curve": _curve_json(E), "p": args.p, "rows": rows, "all_passed": all(r["passed"] for r in rows)}
    if args.digits_of_limit:
        digits, residues = s_p_digits(E, args.p, args.digits_of_limit)
        out["limit_digits"] = list(digits)
        out["residues"] = {str(k): v for k, v in residues.items()}
    return out


#: normalization that reproduces the 37a1 table row at d = 1
CANONICAL_NORMALIZATION = "footnote"


def _trace_row(F, N, delta, r, d, h, args):
    from .heegner import NORMALIZATIONS, combine_traces, twisted_trace

    if (delta * d - (r * h) ** 2) % (4 * N):
        raise UsageError(f"{delta} * {d} is not ({r} h)^2 mod {4 * N} for h = {h}")
    tp, tm, classes = twisted_trace(F, N, delta, r, d, h)
    values = {nm: combine_traces(tp, tm, N, delta, d, args.sign_convention, nm) for nm in NORMALIZATIONS}
    diag = []
    for cl, value in classes:
        diag.append({
            "form": str(cl.representative),
            "sign": cl.sign_label,
            "chi": cl.character_value,
            "stabilizer": cl.stabilizer_order,
            "cm_point": fmt_number(cl.cm_point, args.digits),
            "value": None if value is None else fmt_number(value, args.digits),
        })
    return values[args.normalization], {
        "d": d,
        "h": h,
        "coefficient": fmt_number(values[args.normalization], args.digits),
        "normalizations": {nm: fmt_number(v, args.digits) for nm, v in values.items()},
        "trace_plus": fmt_number(tp, args.digits),
        "trace_minus": fmt_number(tm, args.digits),
        "classes": diag,
    }


def cmd_trace(args):
    from .heegner import curve_trace_function, default_h, klein_j_minus_744

    ds = _int_list(args.d, "--d")
    meta = {"Delta": args.delta, "sign_convention": args.sign_convention, "normalization": args.normalization,
            "canonical_normalization": CANONICAL_NORMALIZATION}
    rows = []
    if args.function == "j":
        if args.delta >= 0:
            raise UsageError("--function j needs a negative --delta")
        for D in ds:
            if (args.delta * D) % 4 not in (0, 1):
                raise UsageError(f"{args.delta} * {D} is not a discriminant")
            c, row = _trace_row(klein_j_minus_744, 1, args.delta, args.delta % 2, D, D % 2, args)
            row["nearest_integer"] = int(mp.nint(mp.re(c)))
            rows.append(row)
        return {"function": "j-744", "level": 1, "r": args.delta % 2, **meta, "rows": rows}
    E = _curve(args)
    N = E.conductor
    r = args.r
    if r is None:
        r = default_h(N, args.delta)
        if r is None:
            raise UsageError(f"{args.delta} is not a square mod {4 * N}")
    F, shift = curve_trace_function(E, args.delta, args.mode)
    for d in ds:
        h = default_h(N, d)
        if h is None:
            raise UsageError(f"{d} is not a square mod {4 * N}")
        rows.append(_trace_row(F, N, args.delta, r, d, h, args)[1])
    return {"function": "zhat", "curve": _curve_json(E), "level": N, "r": r, "mode": args.mode,
            "shift": fmt_number(shift, args.digits), **meta, "rows": rows}


def cmd_lvalues(args):
    from .lvalues import central_derivative, central_value, l_series_job

    E = _curve(args)
    rows = []
    for d in _int_list(args.d, "--d"):
        target = None if args.target == "auto" else args.target
        job = l_series_job(E, d, target, args.err)
        res = central_value(job) if job.target == "value" else central_derivative(job)
        digits = digits_for(max(res.err_bound, 1e-15))
        row = {
            "d": d,
            "root_number": job.root_number,
            "target": job.target,
            "value": f"{res.value:.1e}" if abs(res.value) < res.err_bound else f"{res.value:.{digits}f}",
            "vanishes": res.value == 0 or abs(res.value) < res.err_bound,
            "err_bound": f"{res.err_bound:.2e}",
            "terms": res.terms,
        }
        if res.note:
            row["note"] = res.note
        rows.append(row)
    return {"curve": _curve_json(E), "rows": rows}


def cmd_verify(args):
    from .repro import format_report, run_all

    report = run_all(args.filter, args.cases, args.jobs)
    if args.format == "table":
        sys.stderr.write(format_report(report) + "\n")
    return report, (EXIT_OK if report["ok"] else EXIT_COMPUTE)


# --- parser --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _common():
    # shared options, accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS,
                        help="working precision in bits (default WMOCK_PRECISION or %d)" % DEFAULT_PRECISION)
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS,
                        help="significant digits for reals (default 20)")
    return common


def _add_curve(p):
    p.add_argument("--curve", help="a-invariants a1,a2,a3,a4,a6")
    p.add_argument("--conductor", type=int, help="conductor N of the curve")
    p.add_argument("--label", help="built-in curve: 11a1, 37a1 or 361a1")


def build_parser():
    common = _common()
    parser = _Parser(prog="wmock", description="Weierstrass mock modular forms of elliptic curves.",
                     parents=[common])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mockform", parents=[common], help="S, periods and coefficients of the mock modular form")
    _add_curve(p)
    p.add_argument("--terms", type=int, default=10, help="last q-exponent to print")
    p.set_defaults(func=cmd_mockform)

    p = sub.add_parser("padic", parents=[common], help="p-adic congruences of normalised Hecke images")
    _add_curve(p)
    p.add_argument("-p", type=int, required=True, help="ordinary prime")
    p.add_argument("--max-n", type=int, default=2)
    p.add_argument("--target-t", type=int, default=None, help="required valuation (capped at n); default n")
    p.add_argument("--constant", help="rational multiplier of F to subtract; default c_n mod p^n")
    p.add_argument("--window", type=int, default=None, help="last q-exponent checked")
    p.add_argument("--show", type=int, default=4, help="leading terms to print per level")
    p.add_argument("--digits-of-limit", type=int, default=0, help="also extract this many base-p digits")
    p.set_defaults(func=cmd_padic)

    p = sub.add_parser("trace", parents=[common], help="twisted traces / lift coefficients")
    _add_curve(p)
    p.add_argument("--function", choices=("zhat", "j"), default="zhat")
    p.add_argument("--delta", type=int, required=True, help="fundamental discriminant of the twist")
    p.add_argument("--r", type=int, default=None, help="r with Delta = r^2 mod 4N (default smallest)")
    p.add_argument("--d", required=True, help="comma-separated indices d")
    p.add_argument("--mode", choices=("infinity", "sum"), default="infinity")
    p.add_argument("--sign-convention", choices=("corrected", "literal"), default="corrected")
    p.add_argument("--normalization", choices=("footnote", "theorem"), default="footnote")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("lvalues", parents=[common], help="L(E_d, 1) or L'(E_d, 1)")
    _add_curve(p)
    p.add_argument("--d", default="1", help="comma-separated fundamental discriminants")
    p.add_argument("--target", choices=("auto", "value", "derivative"), default="auto")
    p.add_argument("--err", type=float, default=1e-12, help="tail bound target")
    p.set_defaults(func=cmd_lvalues)

    p = sub.add_parser("verify", parents=[common], help="run the reproduction cases")
    p.add_argument("--filter", default=None, help="regular expression on case ids")
    p.add_argument("--cases", default=None, help="alternative cases JSON file")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("json", "table"), default="json",
                   help="'table' also prints a human table to stderr")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    args.precision = getattr(args, "precision", None)
    args.digits = getattr(args, "digits", 20)
    try:
        configure_precision(args.precision)
    except ValueError as exc:
        sys.stderr.write(f"wmock: error: {exc}\n")
        return EXIT_USAGE
    if args.digits < 1:
        sys.stderr.write("wmock: error: --digits must be positive\n")
        return EXIT_USAGE
    if getattr(args, "target_t", 0) is None:
        args.target_t = args.max_n
    try:
        result = args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"wmock: error: {exc}\n")
        return EXIT_USAGE
    except Exception as exc:
        sys.stdout.write(dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return EXIT_COMPUTE
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    result["precision_bits"] = mp.mp.prec
    try:
        text = dumps(result)
    except TypeError as exc:
        sys.stdout.write(dumps({"error": {"type": "SerializationError", "message": str(exc)}}))
        return EXIT_COMPUTE
    sys.stdout.write(text)
    return code


def entry():
    sys.exit(main())
