"""Command-line front end.

Every value is computed twice, at the planned working precision and ten
digits above it.  If the two runs disagree on the requested digits the
guard digits are doubled once more; a second disagreement exits with
status 4.
"""

import argparse
import dataclasses
import json
import resource
import sys
import time

from .alt_engine import euler_gamma, generalized_sum_alt, weight_dump, weight_profile
from .coefficients import gamma_table, rho_downward, tau_table
from .em_engine import euler_gamma_em, generalized_sum_em
from .errors import AccuracyError, AltSumError, ArgumentError, CapabilityError
from .functions import BUILTINS, power_family
from .numerics import format_bound, format_fixed, working_context
from .parallel import parallel_generalized_sum
from .planner import plan_alt, plan_em, plan_euler_alt, plan_euler_em

__all__ = ["main", "build_parser", "evaluate", "evaluate_euler", "output_record"]

EXIT_OK, EXIT_ARGUMENT, EXIT_CAPABILITY, EXIT_ACCURACY = 0, 2, 3, 4


def _agree(first, second, d):
    ctx = working_context(max(first.d1, second.d1))
    tol = ctx.mpf(10) ** (-(d + 2))
    return all(abs(ctx.convert(u) - ctx.convert(v)) <= tol for u, v in zip(first.value, second.value))


def _validated(run, d, d1):
    """Run at ``d1`` and ``d1 + 10``; on mismatch retry once with doubled guard digits."""
    guard = d1 - d
    for _ in range(2):
        first = run(d + guard)
        second = run(d + guard + 10)
        if _agree(first, second, d):
            return first
        guard *= 2
    raise AccuracyError(f"runs at increasing precision disagree beyond {d} digits")


def evaluate(spec, d, engine="alt", workers=1, m=None, c=None, backend="thread"):
    """Plan, compute and double-run validate a generalized sum.

    Returns the validated :class:`SumResult` at the planned working precision.
    """
    if engine not in ("alt", "em"):
        raise ArgumentError(f"unknown engine {engine!r}")
    if engine == "em" and not spec.has_derivatives:
        raise CapabilityError(f"{spec.name} has no derivative oracle; the em engine is unavailable")
    if engine == "alt":
        plan = plan_alt(d, spec.cert, m=m, c=c, min_m=spec.m0 + 1)
    else:
        plan = plan_em(d, spec.cert, m=m, c=c, min_m=spec.m0 + 1)

    def run(digits):
        p = dataclasses.replace(plan, d1=digits)
        if engine == "em":
            return generalized_sum_em(spec, p)
        if workers > 1:
            return parallel_generalized_sum(spec, p, workers=workers, backend=backend)
        return generalized_sum_alt(spec, p)

    return _validated(run, d, plan.d1)


def evaluate_euler(d, engine="alt", m=None, c=None):
    """Euler's constant with the dedicated fast paths, double-run validated."""
    if engine == "alt":
        plan = plan_euler_alt(d, m=m, c=c)
        return _validated(lambda digits: euler_gamma(d, prec=digits, m=m, c=c), d, plan.d1)
    if engine == "em":
        plan = plan_euler_em(d, m=m, c=c)
        return _validated(lambda digits: euler_gamma_em(d, prec=digits, m=m, c=c), d, plan.d1)
    raise ArgumentError(f"unknown engine {engine!r}")


def _peak_memory():
    # ru_maxrss is reported in kilobytes on Linux
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024


def output_record(result, engine, workers, elapsed):
    d = result.d
    ctx = working_context(result.d1 + 10)
    values = []
    for v in result.value:
        v = ctx.mpc(ctx.convert(v))
        values.append({"re": format_fixed(v.real, d, ctx), "im": format_fixed(v.imag, d, ctx)})
    return {
        "values": values,
        "digits": d,
        "m": result.m,
        "c": result.c,
        "d1": result.d1,
        "bound": format_bound(result.bound),
        "engine": engine,
        "workers": workers,
        "elapsed_ms": round(elapsed * 1000, 3),
        "peak_memory_bytes": _peak_memory(),
    }


def _format_value(entry):
    re_, im = entry["re"], entry["im"]
    if im.strip("-0.") == "":
        return re_
    sign = "-" if im.startswith("-") else "+"
    return f"{re_} {sign} {im.lstrip('-')}i"


def _emit_record(record, fmt, out):
    if fmt == "json":
        out.write(json.dumps(record) + "\n")
        return
    values = record["values"]
    if len(values) == 1:
        out.write(f"value: {_format_value(values[0])}\n")
    else:
        for i, entry in enumerate(values):
            out.write(f"value[{i}]: {_format_value(entry)}\n")
    out.write(
        f"digits: {record['digits']}  m: {record['m']}  c: {record['c']}  d1: {record['d1']}\n"
        f"bound: {record['bound']}\n"
        f"engine: {record['engine']}  workers: {record['workers']}  "
        f"elapsed_ms: {record['elapsed_ms']}  peak_memory_bytes: {record['peak_memory_bytes']}\n"
    )


def _split_list(values):
    out = []
    for item in values or []:
        out.extend(part for part in item.split(",") if part.strip())
    return out


def _builtin_spec(args):
    if args.spec_file:
        raise ArgumentError("--spec-file is reserved; custom spec files are not supported yet")
    if args.function == "power":
        p = _split_list(args.p)
        if not p:
            raise ArgumentError("the power family needs --p")
        return power_family(p, args.delta)
    if args.p:
        raise ArgumentError(f"--p does not apply to {args.function}")
    return BUILTINS[args.function]()


def _cmd_sum(args, out):
    spec = _builtin_spec(args)
    return _run_and_emit(spec, args, out)


def _cmd_zeta(args, out):
    p = _split_list(args.p)
    if not p:
        raise ArgumentError("zeta needs --p")
    return _run_and_emit(power_family(p, args.delta), args, out)


def _run_and_emit(spec, args, out):
    start = time.perf_counter()
    result = evaluate(spec, args.digits, engine=args.engine, workers=args.workers, m=args.m, c=args.c)
    elapsed = time.perf_counter() - start
    _emit_record(output_record(result, args.engine, args.workers, elapsed), args.format, out)
    return EXIT_OK


def _cmd_euler(args, out):
    start = time.perf_counter()
    result = evaluate_euler(args.digits, engine=args.engine, m=args.m, c=args.c)
    elapsed = time.perf_counter() - start
    _emit_record(output_record(result, args.engine, 1, elapsed), args.format, out)
    return EXIT_OK


def _fractions(row):
    return [str(x) for x in row]


def _cmd_coeffs(args, out):
    m = args.m
    table = {"m": m, "gamma": _fractions(gamma_table(m)), "tau": _fractions(tau_table(m)), "rho": _fractions(rho_downward(m))}
    if args.format == "json":
        out.write(json.dumps(table) + "\n")
    else:
        for key in ("gamma", "tau", "rho"):
            out.write(f"{key}: {', '.join(table[key])}\n")
    return EXIT_OK


def _cmd_weights(args, out):
    rects = [{"lo": str(lo), "hi": str(hi), "weight": str(w)} for (lo, hi), w in weight_dump(args.m, args.n)]
    profile = [{"lo": str(lo), "hi": str(hi), "weight": str(w)} for (lo, hi), w in weight_profile(args.m, args.n)]
    if args.format == "json":
        out.write(json.dumps({"m": args.m, "n": args.n, "intervals": rects, "profile": profile}) + "\n")
        return EXIT_OK
    out.write(f"intervals of h_{args.m} for n = {args.n}:\n")
    for r in rects:
        out.write(f"  ({r['lo']}, {r['hi']}]  {r['weight']}\n")
    out.write("piecewise values:\n")
    for r in profile:
        out.write(f"  ({r['lo']}, {r['hi']}]  {r['weight']}\n")
    return EXIT_OK


def _cmd_verify(args, out):
    from .selfcheck import run_checks

    ok = run_checks(report=lambda line: out.write(line + "\n"))
    return EXIT_OK if ok else 1


def _cmd_bench(args, out):
    from .bench import run_suite

    rows = run_suite(args.suite, args.digits_list, workers=args.workers)
    if args.format == "json":
        public = [{k: v for k, v in r.items() if k != "value"} for r in rows]
        out.write(json.dumps({"suite": args.suite, "rows": public}) + "\n")
        return EXIT_OK
    out.write(f"{'d':>7} {'m':>6} {'c':>8} {'time_s':>10} {'memory_MB':>10}\n")
    for r in rows:
        out.write(f"{r['d']:>7} {r['m']:>6} {r['c']:>8} {r['time_s']:>10.4f} {r['peak_memory_bytes'] / 2**20:>10.1f}\n")
    return EXIT_OK


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _add_run_options(p, with_workers=True):
    p.add_argument("--digits", "-d", type=_positive, required=True, help="correct digits after the decimal point")
    p.add_argument("--engine", choices=("alt", "em"), default="alt")
    if with_workers:
        p.add_argument("--workers", type=_positive, default=1, help="parallel workers for the alt engine")
    p.add_argument("--m", type=_positive, help="override the stabilizer order (even)")
    p.add_argument("--c", type=_positive, help="override the shift")
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="altsum", description="High-precision sums of convergent and divergent series."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sum", help="generalized sum of a builtin summand")
    p.add_argument("function", choices=sorted(BUILTINS))
    p.add_argument("--p", action="append", help="exponent(s) of the power family, comma separated; write --p=-1+i")
    p.add_argument("--delta", default="1", help="shift of the power family")
    p.add_argument("--spec-file", help="reserved for custom summands")
    _add_run_options(p)
    p.set_defaults(handler=_cmd_sum)

    p = sub.add_parser("zeta", help="vector of Hurwitz zeta values zeta(p, delta)")
    p.add_argument("--p", action="append", required=True, help="comma-separated exponents, e.g. --p=-1+i,i,1+i,2+i")
    p.add_argument("--delta", default="1")
    _add_run_options(p)
    p.set_defaults(handler=_cmd_zeta)

    p = sub.add_parser("euler", help="Euler's constant")
    _add_run_options(p, with_workers=False)
    p.set_defaults(handler=_cmd_euler)

    p = sub.add_parser("coeffs", help="exact coefficient tables")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(handler=_cmd_coeffs)

    p = sub.add_parser("weights", help="weight function of the finite-sum approximation")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(handler=_cmd_weights)

    p = sub.add_parser("verify", help="run the internal invariant suite")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("bench", help="timing table")
    p.add_argument("--suite", choices=("sqrt", "zeta", "euler"), required=True)
    p.add_argument("--digits-list", type=_positive, nargs="+", required=True)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(handler=_cmd_bench)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, out)
    except CapabilityError as exc:
        print(f"altsum: capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except AccuracyError as exc:
        print(f"altsum: accuracy check failed: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except AltSumError as exc:
        print(f"altsum: error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT


if __name__ == "__main__":
    sys.exit(main())
