"""Euler-Maclaurin reference engine.

Needs the odd derivatives of f from the spec's oracle; there is no
numerical differentiation fallback, since that would void the certified
bound.  Serves as the independent cross-check of the Alt engine.
"""

from fractions import Fraction
from math import comb, factorial
import time

from .alt_engine import (
    SumResult,
    _check_plan,
    _context,
    _point,
    _rational_to_big,
    harmonic_number,
    partial_sum,
)
from .coefficients import bernoulli_numbers
from .errors import ArgumentError, CapabilityError
from .numerics import to_big, working_context
from .planner import SummationPlan, plan_euler_em

__all__ = [
    "stabilizer_G_em",
    "em_approx_finite_sum",
    "generalized_sum_em",
    "euler_gamma_em",
    "faulhaber_sum",
]


def _correction_weights(m):
    # B_{2j} / (2j)! for j = 1..m-1
    bern = bernoulli_numbers(2 * m - 2)
    return [bern[2 * j] / factorial(2 * j) for j in range(1, m)]


def _require_derivatives(spec, m):
    if m >= 2 and spec.odd_derivatives is None:
        raise CapabilityError(
            f"spec {spec.name!r} has no derivative oracle; the Euler-Maclaurin engine needs one for m >= 2"
        )


def _endpoint(spec, x, m, ctx):
    # F(x) + f(x)/2 + sum_j B_{2j}/(2j)! f^{(2j-1)}(x)
    acc = [u + v / 2 for u, v in zip(spec.F(x, ctx), spec.f(x, ctx))]
    for j, w in enumerate(_correction_weights(m), 1):
        if w == 0:
            continue
        weight = w if ctx is None else to_big(w, ctx)
        acc = [s + weight * t for s, t in zip(acc, spec.odd_derivatives(x, 2 * j - 1, ctx))]
    return acc


def stabilizer_G_em(spec, n, m, prec=None):
    """``F(n-1) + f(n-1)/2 + sum_{j<m} B_{2j}/(2j)! f^{(2j-1)}(n-1)``.

    ``prec`` is the working digits, an mpmath context, or ``None`` for
    exact rational evaluation.
    """
    if n < 1 or m < 1:
        raise ArgumentError("need n >= 1 and m >= 1")
    _require_derivatives(spec, m)
    ctx = _context(prec)
    return _endpoint(spec, _point(n - 1, ctx), m, ctx)


def em_approx_finite_sum(spec, n, m, prec=None):
    """Euler-Maclaurin approximation of ``f(0) + ... + f(n-1)``.

    ``[F(n-1) - F(0)] + [f(n-1) + f(0)]/2
      + sum_{j<m} B_{2j}/(2j)! [f^{(2j-1)}(n-1) - f^{(2j-1)}(0)]``;
    exact for polynomials of degree below ``2m - 1``.
    """
    if n < 1 or m < 1:
        raise ArgumentError("need n >= 1 and m >= 1")
    _require_derivatives(spec, m)
    ctx = _context(prec)
    top, bottom = _point(n - 1, ctx), _point(0, ctx)
    acc = [
        (F1 - F0) + (f1 + f0) / 2
        for F1, F0, f1, f0 in zip(spec.F(top, ctx), spec.F(bottom, ctx), spec.f(top, ctx), spec.f(bottom, ctx))
    ]
    for j, w in enumerate(_correction_weights(m), 1):
        if w == 0:
            continue
        weight = w if ctx is None else to_big(w, ctx)
        hi = spec.odd_derivatives(top, 2 * j - 1, ctx)
        lo = spec.odd_derivatives(bottom, 2 * j - 1, ctx)
        acc = [s + weight * (u - v) for s, u, v in zip(acc, hi, lo)]
    return acc


def generalized_sum_em(spec, plan: SummationPlan):
    """Generalized sum ``f(0) + ... + f(c) - G^EM_{m,F}(c+1)``."""
    _check_plan(spec, plan, "em")
    _require_derivatives(spec, plan.m)
    start = time.perf_counter()
    ctx = working_context(plan.d1)
    head = partial_sum(spec, 0, plan.c + 1, ctx)
    tail = _endpoint(spec, _point(plan.c, ctx), plan.m, ctx)
    value = tuple(ctx.mpc(s - t) for s, t in zip(head, tail))
    return SumResult(
        value=value,
        d=plan.d,
        m=plan.m,
        c=plan.c,
        bound=plan.bound,
        elapsed=time.perf_counter() - start,
        method="em",
        d1=plan.d1,
    )


def euler_gamma_em(d, prec=None, m=None, c=None):
    """Euler's constant via Euler-Maclaurin:

        gamma = H_{c+1} - ln(c+1) - 1/(2(c+1)) + sum_{j<m} B_{2j} / (2j (c+1)^{2j}) - R
    """
    start = time.perf_counter()
    plan = plan_euler_em(d, m=m, c=c)
    d1 = plan.d1 if prec is None else prec
    ctx = working_context(d1)
    n = plan.c + 1
    value = _rational_to_big(*harmonic_number(n), ctx)
    value -= ctx.ln(n) + ctx.one / (2 * n)
    bern = bernoulli_numbers(2 * plan.m - 2)
    inv_sq = ctx.one / (n * n)
    power = ctx.one
    for j in range(1, plan.m):
        power *= inv_sq
        value += to_big(bern[2 * j] / (2 * j), ctx) * power
    return SumResult(
        value=(ctx.mpc(value),),
        d=d,
        m=plan.m,
        c=plan.c,
        bound=plan.bound,
        elapsed=time.perf_counter() - start,
        method="em",
        d1=d1,
    )


def faulhaber_sum(p, n):
    """``0^p + 1^p + ... + (n-1)^p`` from Bernoulli numbers (with ``0^0 = 1``)."""
    if p < 0 or n < 0:
        raise ArgumentError("need p >= 0 and n >= 0")
    bern = bernoulli_numbers(p)
    total = sum(bern[a] * comb(p + 1, a) * n ** (p + 1 - a) for a in range(p + 1))
    return Fraction(total, p + 1)
