from fractions import Fraction
import random

from hypothesis import given, settings, strategies as st
import mpmath
import pytest

from altsum.alt_engine import (
    approx_finite_sum,
    euler_gamma,
    generalized_sum_alt,
    harmonic_number,
    partial_sum,
    stabilizer_G,
    weight_dump,
    weight_profile,
)
from altsum.coefficients import gamma_table, tau_table
from altsum.em_engine import euler_gamma_em
from altsum.errors import ArgumentError
from altsum.functions import AnalyticityCertificate, FunctionSpec, power_family, reciprocal_spec, sqrt_example_spec
from altsum.numerics import working_context
from altsum.planner import SummationPlan, plan_alt, plan_em

F = Fraction

EULER_50 = "0.57721566490153286060651209008240243104215933593992"


def poly_spec(coeffs):
    """Rational polynomial summand with exact antiderivative."""

    def f(x, ctx):
        return [sum(c * x**i for i, c in enumerate(coeffs))]

    def antider(x, ctx):
        return [sum(c * x ** (i + 1) / (i + 1) for i, c in enumerate(coeffs))]

    deg = max(len(coeffs) - 1, 0)
    return FunctionSpec(f=f, F=antider, cert=AnalyticityCertificate(a=0, lam=deg, mu=1), m0=(deg + 1) // 2 + 1)


def double_sum_oracle(spec, n, m):
    # sum_j gamma_j sum_{i<j} int_{i-j/2}^{n-1+j/2-i} f
    total = F(0)
    for j, g in enumerate(gamma_table(m), 1):
        for i in range(j):
            lo, hi = F(2 * i - j, 2), n - 1 + F(j, 2) - i
            total += g * (spec.F(hi, None)[0] - spec.F(lo, None)[0])
    return total


def symmetric_oracle(spec, n, m):
    # sum_{|alpha|<m} tau_{1+|alpha|} int_{alpha/2-1/2}^{n-1/2-alpha/2} f
    tau = tau_table(m)
    total = F(0)
    for alpha in range(1 - m, m):
        lo, hi = F(alpha - 1, 2), n - F(1, 2) - F(alpha, 2)
        total += tau[abs(alpha)] * (spec.F(hi, None)[0] - spec.F(lo, None)[0])
    return total


def test_constant_stabilizer():
    spec = poly_spec([F(1)])
    for m in range(1, 9):
        assert stabilizer_G(spec, 7, m)[0] == F(13, 2)
        assert approx_finite_sum(spec, 9, m)[0] == 9


def test_small_finite_sums():
    assert approx_finite_sum(poly_spec([F(0), F(1)]), 5, 1)[0] == 10
    assert approx_finite_sum(poly_spec([F(0)] * 3 + [F(1)]), 3, 2)[0] == 9


def test_euler_stabilizer_order_one():
    ctx = working_context(40)
    assert abs(stabilizer_G(reciprocal_spec(), 100, 1, ctx)[0] - ctx.ln(ctx.mpf(201) / 2)) < ctx.mpf(10) ** -38


def test_sqrt_stabilizer_order_two():
    spec = sqrt_example_spec()
    ctx = working_context(40)
    Fx = lambda x: spec.F(ctx.mpf(x), ctx)[0]  # noqa: E731
    expected = ctx.mpf(4) / 3 * Fx(9.5) - ctx.mpf(1) / 6 * (Fx(9) + Fx(10))
    assert abs(stabilizer_G(spec, 10, 2, ctx)[0] - expected) < ctx.mpf(10) ** -35


def test_stabilizer_uses_2m_minus_1_evaluations():
    calls = []
    base = reciprocal_spec()

    def counting_F(x, ctx):
        calls.append(x)
        return base.F(x, ctx)

    spec = FunctionSpec(f=base.f, F=counting_F, cert=base.cert, m0=1)
    stabilizer_G(spec, 20, 7, 30)
    assert len(calls) == 13


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.data())
def test_polynomial_exactness(m, data):
    deg = data.draw(st.integers(0, 2 * m - 1))
    coeffs = data.draw(st.lists(st.fractions(-20, 20, max_denominator=50), min_size=deg + 1, max_size=deg + 1))
    n = data.draw(st.integers(1, 40))
    spec = poly_spec(coeffs)
    direct = sum(spec.f(F(k), None)[0] for k in range(n))
    assert approx_finite_sum(spec, n, m)[0] == direct


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(1, 30), st.lists(st.integers(-9, 9), min_size=1, max_size=12))
def test_three_forms_agree(m, n, coeffs):
    spec = poly_spec([F(c) for c in coeffs])
    value = approx_finite_sum(spec, n, m)[0]
    assert value == double_sum_oracle(spec, n, m) == symmetric_oracle(spec, n, m)


def test_non_polynomial_forms_agree_numerically():
    spec = power_family(["-1+i", "5/2"], "i")
    ctx = working_context(50)
    for n, m in [(5, 3), (12, 6), (30, 10)]:
        alt2 = approx_finite_sum(spec, n, m, ctx)
        tau = tau_table(m)
        for k in range(2):
            sym = ctx.zero
            for alpha in range(1 - m, m):
                lo = ctx.mpf(alpha - 1) / 2
                hi = n - ctx.mpf(1) / 2 - ctx.mpf(alpha) / 2
                sym += tau[abs(alpha)] * (spec.F(hi, ctx)[k] - spec.F(lo, ctx)[k])
            assert abs(alt2[k] - sym) < ctx.mpf(10) ** -45 * max(1, abs(sym))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(1, 40), st.integers(1, 40), st.lists(st.integers(-9, 9), min_size=1, max_size=10))
def test_telescoping(m, n1, n2, coeffs):
    n1, n2 = sorted((n1, n2 + n1))
    spec = poly_spec([F(c) for c in coeffs])
    lhs = approx_finite_sum(spec, n2, m)[0] - approx_finite_sum(spec, n1, m)[0]
    assert lhs == stabilizer_G(spec, n2, m)[0] - stabilizer_G(spec, n1, m)[0]


def test_telescoping_numeric():
    spec = sqrt_example_spec()
    ctx = working_context(50)
    for m in (2, 5):
        lhs = approx_finite_sum(spec, 31, m, ctx)[0] - approx_finite_sum(spec, 11, m, ctx)[0]
        rhs = stabilizer_G(spec, 31, m, ctx)[0] - stabilizer_G(spec, 11, m, ctx)[0]
        assert abs(lhs - rhs) < ctx.mpf(10) ** -40


def test_rejects_bad_arguments():
    spec = reciprocal_spec()
    with pytest.raises(ArgumentError):
        stabilizer_G(spec, 3, 0, 20)
    with pytest.raises(ArgumentError):
        approx_finite_sum(spec, 0, 2, 20)


def test_zeta2_small_plan():
    spec = power_family(2, 1)
    plan = plan_alt(10, spec.cert, m=6, c=40, min_m=spec.m0 + 1)
    res = generalized_sum_alt(spec, plan)
    ctx = working_context(30)
    err = abs(ctx.convert(res.value[0]) - ctx.pi**2 / 6)
    assert err <= ctx.convert(plan.bound) <= ctx.mpf(10) ** -10 / 2
    assert mpmath.nstr(res.value[0].real, 11) == "1.6449340668"


def test_plan_must_respect_minimal_order():
    spec = power_family("-1", 1)
    assert spec.m0 == 2
    with pytest.raises(ArgumentError):
        generalized_sum_alt(spec, SummationPlan(d=10, m=2, c=20, d1=30, bound=1))


def test_plan_engine_mismatch():
    spec = reciprocal_spec()
    with pytest.raises(ArgumentError):
        generalized_sum_alt(spec, plan_em(20, spec.cert, min_m=2))


def test_generic_reciprocal_gives_euler():
    spec = reciprocal_spec()
    res = generalized_sum_alt(spec, plan_alt(30, spec.cert, min_m=2))
    ctx = working_context(40)
    assert abs(ctx.convert(res.value[0]) - ctx.mpf(EULER_50)) < ctx.mpf(10) ** -30


def test_sqrt_two_plans_agree():
    spec = sqrt_example_spec()
    a = generalized_sum_alt(spec, plan_alt(50, spec.cert, min_m=3))
    b = generalized_sum_alt(spec, plan_alt(50, spec.cert, m=40, min_m=3))
    assert (a.m, a.c) != (b.m, b.c)
    ctx = working_context(80)
    assert abs(ctx.convert(a.value[0]) - ctx.convert(b.value[0])) < ctx.mpf(10) ** -50


@pytest.mark.parametrize("d", [10, 30])
def test_plan_independence_vector(d):
    spec = power_family(["-1+i", "i", "1+i", "2+i"], "i")
    a = generalized_sum_alt(spec, plan_alt(d, spec.cert, min_m=spec.m0 + 1))
    b = generalized_sum_alt(spec, plan_alt(d, spec.cert, m=a.m + 6, min_m=spec.m0 + 1))
    ctx = working_context(d + 20)
    for u, v in zip(a.value, b.value):
        assert abs(ctx.convert(u) - ctx.convert(v)) < ctx.mpf(10) ** -d


def test_euler_fast_path():
    res = euler_gamma(10)
    assert mpmath.nstr(res.value[0].real, 10) == "0.5772156649"
    assert res.bound <= mpmath.mpf(10) ** -10 / 2


def test_euler_fast_path_50_digits():
    ctx = working_context(70)
    a = euler_gamma(50)
    b = euler_gamma(50, prec=a.d1 + 10)
    ref = ctx.mpf(EULER_50)
    assert abs(ctx.convert(a.value[0]) - ref) < ctx.mpf(10) ** -50
    assert abs(ctx.convert(a.value[0]) - ctx.convert(b.value[0])) < ctx.mpf(10) ** -52


def test_euler_thousand_digits_both_engines():
    a, b = euler_gamma(1000), euler_gamma_em(1000)
    ctx = working_context(1030)
    assert abs(ctx.convert(a.value[0]) - ctx.convert(b.value[0])) < ctx.mpf(10) ** -1000


def test_harmonic_number_exact():
    for n in (0, 1, 2, 7, 100):
        p, q = harmonic_number(n)
        assert F(int(p), int(q)) == sum((F(1, k) for k in range(1, n + 1)), F(0))


def test_partial_sum_order_and_empty():
    spec = poly_spec([F(0), F(1)])
    assert partial_sum(spec, 3, 7, None) == [18]
    assert partial_sum(spec, 5, 5, None) == [0]


def test_weight_dump_examples():
    assert weight_dump(1, 10) == [((F(-1, 2), F(19, 2)), F(1))]
    dump = weight_dump(3, 10)
    assert dict(dump)[(F(-1, 2), F(19, 2))] == F(23, 15)
    assert len(dump) == 5
    assert sum(w * (hi - lo) for (lo, hi), w in dump) == 10


@given(st.integers(1, 12), st.integers(0, 30))
def test_weight_total_length(m, t):
    n = max(1, m - 1 + t)
    assert sum(w * (hi - lo) for (lo, hi), w in weight_dump(m, n)) == n
    assert sum(w * (hi - lo) for (lo, hi), w in weight_profile(m, n)) == n


def test_weight_profile_interior_is_one():
    prof = weight_profile(3, 10)
    assert ((F(1, 2), F(17, 2)), 1) in prof
    assert prof[0] == ((F(-3, 2), -1), F(1, 30)) and prof[2] == ((F(-1, 2), 0), F(19, 15))
    # symmetric about the centre of the summation range
    weights = [w for _, w in prof]
    assert weights == weights[::-1]


def test_weight_dump_rejects_short_range():
    with pytest.raises(ArgumentError):
        weight_dump(6, 4)


def test_weights_reproduce_integral_approximation():
    rnd = random.Random(3)
    coeffs = [F(rnd.randint(-5, 5)) for _ in range(6)]
    spec = poly_spec(coeffs)
    m, n = 3, 10
    total = sum(w * (spec.F(hi, None)[0] - spec.F(lo, None)[0]) for (lo, hi), w in weight_dump(m, n))
    assert total == approx_finite_sum(spec, n, m)[0]
