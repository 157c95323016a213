"""Serial summation engine driven only by values of f and its antiderivative F.

The finite sum ``f(0) + ... + f(n-1)`` is approximated by
``G(n) - G(0)`` where the stabilizer

    G(n) = tau_1 F(n - 1/2) + sum_{alpha=1}^{m-1} tau_{1+alpha}
           [F(n - 1/2 - alpha/2) + F(n - 1/2 + alpha/2)]

is exact for polynomials of degree below 2m.  A (possibly divergent)
series is summed as ``f(0) + ... + f(c-1) - G(c)``, with ``c`` chosen by
the planner so that the remainder is certified below ``10**-d / 2``.
"""

from dataclasses import dataclass
from fractions import Fraction
import time
from typing import Optional

from mpmath import libmp

from .coefficients import tau_table
from .errors import ArgumentError
from .numerics import to_big, working_context
from .planner import SummationPlan, plan_euler_alt

__all__ = [
    "SumResult",
    "stabilizer_G",
    "approx_finite_sum",
    "partial_sum",
    "generalized_sum_alt",
    "euler_gamma",
    "harmonic_number",
    "weight_dump",
    "weight_profile",
]


@dataclass(frozen=True)
class SumResult:
    """Outcome of one engine run.

    Attributes
    ----------
    value : tuple
        One entry per component (mpc/mpf at working precision, or
        ``Fraction`` in exact mode).
    d : int or None
        Requested digits.
    m : int
        Stabilizer order.
    c : int
        Shift (or finite-sum length).
    bound : mpf or None
        Certified remainder bound; ``None`` when no bound applies.
    elapsed : float
        Wall-clock seconds.
    method : str
        ``alt-serial``, ``alt-parallel`` or ``em``.
    d1 : int or None
        Working digits.
    workers : int
    """

    value: tuple
    d: Optional[int]
    m: int
    c: int
    bound: object
    elapsed: float
    method: str
    d1: Optional[int] = None
    workers: int = 1


def _context(prec):
    if prec is None:
        return None
    if isinstance(prec, int):
        return working_context(prec)
    return prec


def _point(x, ctx):
    return x if ctx is None else to_big(x, ctx)


def _coefficients(values, ctx):
    return list(values) if ctx is None else [to_big(v, ctx) for v in values]


def _stabilizer(spec, n, m, ctx):
    coef = _coefficients(tau_table(m), ctx)
    centre = Fraction(2 * n - 1, 2)
    acc = [coef[0] * v for v in spec.F(_point(centre, ctx), ctx)]
    for alpha in range(1, m):
        half = Fraction(alpha, 2)
        lo = spec.F(_point(centre - half, ctx), ctx)
        hi = spec.F(_point(centre + half, ctx), ctx)
        w = coef[alpha]
        acc = [s + w * (u + v) for s, u, v in zip(acc, lo, hi)]
    return acc


def stabilizer_G(spec, n, m, prec=None):
    """Stabilizer ``G_{m,F}(n)`` from exactly ``2m - 1`` values of F.

    Parameters
    ----------
    spec : FunctionSpec
    n : int or Fraction
    m : int
        Order, at least 1.
    prec : int, mpmath context or None
        Working digits; ``None`` evaluates exactly in rationals.
    """
    if m < 1:
        raise ArgumentError("order m must be at least 1")
    return _stabilizer(spec, n, m, _context(prec))


def approx_finite_sum(spec, n, m, prec=None):
    """Approximation ``A_m`` of ``f(0) + ... + f(n-1)``.

    Exact when f is a polynomial of degree at most ``2m - 1``.
    """
    if n < 1 or m < 1:
        raise ArgumentError("need n >= 1 and m >= 1")
    ctx = _context(prec)
    upper = _stabilizer(spec, n, m, ctx)
    lower = _stabilizer(spec, 0, m, ctx)
    return [u - v for u, v in zip(upper, lower)]


def partial_sum(spec, lo, hi, ctx):
    """``f(lo) + ... + f(hi-1)`` accumulated in increasing k."""
    acc = None
    for k in range(lo, hi):
        values = spec.f(_point(k, ctx), ctx)
        acc = list(values) if acc is None else [s + v for s, v in zip(acc, values)]
    if acc is None:
        zero = 0 if ctx is None else ctx.zero
        acc = [zero] * spec.q
    return acc


def _check_plan(spec, plan, engine):
    if plan.engine != engine:
        raise ArgumentError(f"plan was made for the {plan.engine} engine, not {engine}")
    if plan.m < spec.m0 + 1:
        raise ArgumentError(f"plan order m={plan.m} must exceed the spec's m0={spec.m0}")
    if plan.c < 1:
        raise ArgumentError("plan shift c must be at least 1")


def _complexify(values, ctx):
    return tuple(ctx.mpc(v) for v in values)


def generalized_sum_alt(spec, plan: SummationPlan):
    """Generalized sum ``f(0) + ... + f(c-1) - G_{m,F}(c)``.

    For a convergent series with ``F(inf) = 0`` this is the ordinary sum.
    The certified bound is copied from the plan.
    """
    _check_plan(spec, plan, "alt")
    start = time.perf_counter()
    ctx = working_context(plan.d1)
    head = partial_sum(spec, 0, plan.c, ctx)
    g = _stabilizer(spec, plan.c, plan.m, ctx)
    value = _complexify([s - t for s, t in zip(head, g)], ctx)
    return SumResult(
        value=value,
        d=plan.d,
        m=plan.m,
        c=plan.c,
        bound=plan.bound,
        elapsed=time.perf_counter() - start,
        method="alt-serial",
        d1=plan.d1,
    )


def _harmonic_split(a, b):
    # sum_{k=a}^{b-1} 1/k as an unreduced P/Q with Q = a (a+1) ... (b-1)
    if b - a == 1:
        return libmp.MPZ(1), libmp.MPZ(a)
    mid = (a + b) // 2
    p1, q1 = _harmonic_split(a, mid)
    p2, q2 = _harmonic_split(mid, b)
    return p1 * q2 + p2 * q1, q1 * q2


def harmonic_number(n):
    """Exact ``H_n`` as an unreduced ``(numerator, denominator)`` pair (binary splitting)."""
    if n < 0:
        raise ArgumentError("n must be nonnegative")
    if n == 0:
        return libmp.MPZ(0), libmp.MPZ(1)
    return _harmonic_split(1, n + 1)


def _rational_to_big(p, q, ctx):
    return ctx.make_mpf(libmp.from_rational(p, q, ctx.prec, libmp.round_nearest))


def euler_gamma(d, prec=None, m=None, c=None):
    """Euler's constant to `d` digits.

    Uses the rearrangement

        gamma = H_c + ln 2 - tau_1 ln(2c+1)
                - sum_{j=2}^m tau_j ln((2c+1)^2 - (j-1)^2) - R

    which needs only m logarithms of integers; ``H_c`` is summed exactly.
    ``prec`` overrides the planned working digits.
    """
    start = time.perf_counter()
    plan = plan_euler_alt(d, m=m, c=c)
    d1 = plan.d1 if prec is None else prec
    ctx = working_context(d1)
    m, c = plan.m, plan.c
    tau = tau_table(m)
    value = _rational_to_big(*harmonic_number(c), ctx) + ctx.ln2
    odd = 2 * c + 1
    value -= to_big(tau[0], ctx) * ctx.ln(odd)
    sq = odd * odd
    for j in range(2, m + 1):
        value -= to_big(tau[j - 1], ctx) * ctx.ln(sq - (j - 1) ** 2)
    return SumResult(
        value=(ctx.mpc(value),),
        d=d,
        m=m,
        c=c,
        bound=plan.bound,
        elapsed=time.perf_counter() - start,
        method="alt-serial",
        d1=d1,
    )


def weight_dump(m, n):
    """Rectangle decomposition of the weight function ``h_m``.

    Returns ``[((lo, hi), weight), ...]`` for the half-open intervals
    ``(alpha/2 - 1/2, n - 1/2 - alpha/2]`` with weight ``tau_{1+|alpha|}``,
    ``alpha = 1-m .. m-1``, coincident intervals merged, sorted by ``lo``.
    The weighted lengths add up to ``n``.
    """
    if m < 1:
        raise ArgumentError("order m must be at least 1")
    if n < max(1, m - 1):
        raise ArgumentError(f"need n >= m - 1 (m={m}, n={n})")
    tau = tau_table(m)
    merged = {}
    for alpha in range(1 - m, m):
        key = (Fraction(alpha - 1, 2), Fraction(2 * n - 1 - alpha, 2))
        merged[key] = merged.get(key, 0) + tau[abs(alpha)]
    return sorted(merged.items())


def weight_profile(m, n):
    """Piecewise-constant values of ``h_m`` on its elementary segments.

    Adjacent segments of equal weight are joined.  Away from the ends the
    weight is exactly 1.
    """
    pieces = weight_dump(m, n)
    cuts = sorted({x for (lo, hi), _ in pieces for x in (lo, hi)})
    out = []
    for lo, hi in zip(cuts, cuts[1:]):
        w = sum((wt for (a, b), wt in pieces if a <= lo and hi <= b), Fraction(0))
        if out and out[-1][1] == w and out[-1][0][1] == lo:
            out[-1] = ((out[-1][0][0], hi), w)
        else:
            out.append(((lo, hi), w))
    return out
