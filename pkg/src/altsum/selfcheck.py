"""Fast invariant suite behind ``altsum verify``."""

from fractions import Fraction
import random

from .alt_engine import approx_finite_sum, euler_gamma, generalized_sum_alt, stabilizer_G, weight_dump
from .coefficients import (
    bernoulli_from_tau,
    bernoulli_numbers,
    gamma_table,
    gamma_weighted_power_sum,
    odd_power_cancellation,
    rho_downward,
    tau_table,
)
from .em_engine import em_approx_finite_sum, euler_gamma_em, faulhaber_sum, generalized_sum_em
from .functions import AnalyticityCertificate, FunctionSpec, power_family, reciprocal_spec
from .numerics import working_context
from .parallel import assemble, make_partition, parallel_generalized_sum, worker_pass
from .planner import KAPPA, LAMBDA_STAR, plan_alt, plan_em

__all__ = ["CHECKS", "run_checks"]


def _check_coefficients():
    for m in range(1, 31):
        gamma = gamma_table(m)
        if rho_downward(m) != tuple(g * j for j, g in enumerate(gamma, 1)):
            return False
        if odd_power_cancellation(m, 1) != 1:
            return False
        if any(odd_power_cancellation(m, q) for q in range(3, 2 * m, 2)):
            return False
        tau = tau_table(m)
        if tau[0] + 2 * sum(tau[1:]) != 1:
            return False
        bern = bernoulli_numbers(2 * m - 1)
        if any(bernoulli_from_tau(m, p) != bern[p] for p in range(2 * m)):
            return False
    return True


def _check_weight_estimate():
    ctx = working_context(60)
    lam = ctx.mpf(LAMBDA_STAR)
    for m in range(1, 41):
        excess = ctx.mpf("1.0331") if m == 1 else ctx.mpf("1.001")
        exact = gamma_weighted_power_sum(m)
        if ctx.mpf(exact.numerator) / exact.denominator > excess * ctx.pi * lam**m * ctx.mpf(m) ** (2 * m + 1):
            return False
    return abs(ctx.sqrt(lam / 4) - ctx.mpf(KAPPA)) < ctx.mpf(10) ** -48


def _poly_spec(coeffs):
    # f(x) = sum c_i x^i with exact antiderivative and derivatives
    def f(x, ctx):
        return [sum(c * x**i for i, c in enumerate(coeffs))]

    def F(x, ctx):
        return [sum(c * x ** (i + 1) / (i + 1) for i, c in enumerate(coeffs))]

    def deriv(x, order, ctx):
        total = 0
        for i, c in enumerate(coeffs):
            if i >= order:
                fall = 1
                for t in range(order):
                    fall *= i - t
                total += c * fall * x ** (i - order)
        return [total]

    cert = AnalyticityCertificate(a=0, lam=len(coeffs) - 1, mu=1)
    return FunctionSpec(f=f, F=F, odd_derivatives=deriv, cert=cert, m0=len(coeffs) // 2 + 1)


def _check_polynomials():
    rng = random.Random(7)
    for _ in range(20):
        m = rng.randint(1, 6)
        deg = rng.randint(0, 2 * m - 1)
        coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(deg + 1)]
        spec = _poly_spec(coeffs)
        n = rng.randint(1, 40)
        direct = sum(spec.f(Fraction(k), None)[0] for k in range(n))
        if approx_finite_sum(spec, n, m)[0] != direct:
            return False
        if deg < 2 * m - 1 and em_approx_finite_sum(spec, n, m)[0] != direct:
            return False
    return all(faulhaber_sum(p, n) == sum(k**p for k in range(n)) for p in range(8) for n in range(30))


def _check_weights():
    for m in range(1, 8):
        for n in range(max(1, m - 1), m + 6):
            if sum(w * (hi - lo) for (lo, hi), w in weight_dump(m, n)) != n:
                return False
    return True


def _check_euler():
    a, b = euler_gamma(60), euler_gamma_em(60)
    ctx = working_context(80)
    return abs(ctx.convert(a.value[0]) - ctx.convert(b.value[0])) < ctx.mpf(10) ** -60


def _check_zeta2():
    spec = power_family(2, 1)
    plan = plan_alt(30, spec.cert, min_m=spec.m0 + 1)
    res = generalized_sum_alt(spec, plan)
    ctx = working_context(60)
    err = abs(ctx.convert(res.value[0]) - ctx.pi**2 / 6)
    return err <= ctx.convert(plan.bound) <= ctx.mpf(10) ** -30 / 2


def _check_alt_em_vector():
    spec = power_family(["-1+i", "i", "1+i", "2+i"], "i")
    a = generalized_sum_alt(spec, plan_alt(20, spec.cert, min_m=spec.m0 + 1))
    b = generalized_sum_em(spec, plan_em(20, spec.cert, min_m=spec.m0 + 1))
    ctx = working_context(40)
    return all(abs(ctx.convert(u) - ctx.convert(v)) < ctx.mpf(10) ** -20 for u, v in zip(a.value, b.value))


def _check_parallel():
    spec = reciprocal_spec()
    m, c = 16, 40
    serial = stabilizer_G(spec, c, m, 50)[0]
    for k in (1, 2, 3, 4):
        part = make_partition(m, k)
        outs = [worker_pass(i, part, m, c, spec, 50) for i in range(1, k + 1)]
        tau = tau_table(m)
        if sum(o.theta_ev for o in outs) != tau[1] or sum(o.theta_od for o in outs) != tau[0]:
            return False
        if abs(assemble(outs, part, 50)[0] - serial) > serial.context.mpf(10) ** -47:
            return False
    plan = plan_alt(30, spec.cert, min_m=2)
    a = generalized_sum_alt(spec, plan)
    b = parallel_generalized_sum(spec, plan, workers=3)
    return abs(a.value[0] - b.value[0]) < a.value[0].context.mpf(10) ** -30


CHECKS = [
    ("coefficient identities", _check_coefficients),
    ("coefficient weight estimate and constants", _check_weight_estimate),
    ("polynomial exactness and Faulhaber", _check_polynomials),
    ("weight function total length", _check_weights),
    ("Euler constant, two engines", _check_euler),
    ("zeta(2) within certified bound", _check_zeta2),
    ("vector Hurwitz values, two engines", _check_alt_em_vector),
    ("parallel stabilizer equals serial", _check_parallel),
]


def run_checks(report=print):
    """Run every check; returns True when all pass."""
    ok = True
    for name, fn in CHECKS:
        try:
            passed = bool(fn())
        except Exception as exc:  # a crash counts as a failure
            passed = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok &= passed
        report(f"{'PASS' if passed else 'FAIL'}  {name}")
    return ok
