"""Certified remainder bounds and the choice of (m, c, working digits).

Every bound assumes the growth certificate of the summand holds on the
right half-plane sector (half-angle pi/2) unless stated otherwise.  Plans
guarantee ``bound <= 10**-d / 2``; the shift ``c`` comes from the
closed-form root of the bound and is then re-checked against the bound
itself.
"""

from dataclasses import dataclass
from fractions import Fraction
import math
from numbers import Rational
from typing import Optional

from .coefficients import gamma_weighted_power_sum
from .errors import ArgumentError, PlanningError
from .numerics import guard_digits, lambert_w, to_big, working_context

__all__ = [
    "LAMBDA_STAR",
    "KAPPA",
    "KAPPA_EM",
    "CostModel",
    "SummationPlan",
    "lambda_star",
    "kappa",
    "kappa_em",
    "alt_remainder_bound",
    "alt_remainder_bound_general",
    "em_remainder_bound",
    "euler_alt_bound",
    "euler_em_bound",
    "euler_special_bounds",
    "bound_from_M",
    "typical_order",
    "cost_optimal_order",
    "em_order",
    "plan_alt",
    "plan_em",
    "plan_euler_alt",
    "plan_euler_em",
]

# max over 0 < t < 1 of (1-t)^(t-1) (1+t)^(-1-t) t^2
LAMBDA_STAR = "0.30812021193851280624789747871915433419329331038844"
# sqrt(LAMBDA_STAR / 4)
KAPPA = "0.27754288494686402528234679456941132341357690881669"
# 1 / (pi e)
KAPPA_EM = "0.11709966304863832138048453693333374442782984255212"

_BOUND_DIGITS = 30


def lambda_star(ctx):
    return ctx.mpf(LAMBDA_STAR)


def kappa(ctx):
    return ctx.mpf(KAPPA)


def kappa_em(ctx):
    return ctx.mpf(KAPPA_EM)


@dataclass(frozen=True)
class CostModel:
    """Relative cost of one value of f, F, a coefficient, and a derivative.

    ``eps`` is the exponent excess in the derivative-chain cost
    ``T_der m^(2 + eps)`` of the Euler-Maclaurin engine.
    """

    T_f: float = 1.0
    T_F: float = 1.0
    T_tau: float = 0.01
    T_der: Optional[float] = None
    eps: float = 0.5

    def __post_init__(self):
        if self.T_f <= 0:
            raise ArgumentError("T_f must be positive")
        for name in ("T_F", "T_tau", "eps"):
            if getattr(self, name) < 0:
                raise ArgumentError(f"{name} must be nonnegative")
        if self.T_der is not None and self.T_der < 0:
            raise ArgumentError("T_der must be nonnegative")


@dataclass(frozen=True)
class SummationPlan:
    """Order, shift and precision for one generalized sum."""

    d: int
    m: int
    c: int
    d1: int
    bound: object
    engine: str = "alt"

    @property
    def target(self):
        return working_context(_BOUND_DIGITS).mpf(10) ** (-self.d) / 2


def _ctx(prec):
    return working_context(prec or _BOUND_DIGITS)


def _real(x, ctx):
    if isinstance(x, (int, Rational)):
        return to_big(Fraction(x), ctx)
    return ctx.convert(x)


def _target(d, ctx):
    return ctx.mpf(10) ** (-d) / 2


def _require_right_angle(cert):
    if not cert.right_angle:
        raise ArgumentError("this bound needs a certificate on the half-angle pi/2 sector")


def _coefficient_excess(m, ctx):
    return ctx.mpf("1.0331") if m == 1 else ctx.mpf("1.001")


def alt_remainder_bound(cert, m, c, prec=None):
    """Remainder bound of the shifted Alt sum, using the closed-form estimate
    of ``sum |gamma_j| j^(2m+1)``.

        1.001 pi mu 3^lam / ((2m+1)(2m-1-lam)) (Lambda*/4)^m m^(2m+1)
            / (c + a - m/2 - 1/2)^(2m-1-lam)

    (1.0331 replaces 1.001 for ``m = 1``).
    """
    _require_right_angle(cert)
    ctx = _ctx(prec)
    if m < 1:
        raise ArgumentError("m must be at least 1")
    lam, mu, a = _real(cert.lam, ctx), _real(cert.mu, ctx), _real(cert.a, ctx)
    expo = 2 * m - 1 - lam
    if expo <= 0:
        raise ArgumentError(f"need 2m - 1 > lam (m={m}, lam={cert.lam})")
    base = c + a - ctx.mpf(m) / 2 - ctx.mpf(1) / 2
    if base <= 0:
        raise ArgumentError(f"need c + a - m/2 - 1/2 > 0 (m={m}, c={c}, a={cert.a})")
    if mu == 0:
        return ctx.zero
    front = _coefficient_excess(m, ctx) * ctx.pi * mu * ctx.power(3, lam) / ((2 * m + 1) * expo)
    return front * ctx.power(lambda_star(ctx) / 4, m) * ctx.power(m, 2 * m + 1) / ctx.power(base, expo)


def alt_remainder_bound_general(cert, m, c, prec=None):
    """Remainder bound for any sector half-angle ``theta0`` in (0, pi/2].

        mu (2 + sin t0)^lam sum|gamma_j| j^(2m+1)
            / ((2m+1)(2m-1-lam)(2 sin t0)^(2m) (c + a - m/2 - 1/2)^(2m-1-lam))

    with the exact coefficient sum.
    """
    ctx = _ctx(prec)
    if m < 1:
        raise ArgumentError("m must be at least 1")
    lam, mu, a = _real(cert.lam, ctx), _real(cert.mu, ctx), _real(cert.a, ctx)
    expo = 2 * m - 1 - lam
    if expo <= 0:
        raise ArgumentError(f"need lam < 2m - 1 (m={m}, lam={cert.lam})")
    if c + a < ctx.mpf(m + 3) / 2:
        raise ArgumentError(f"need c + a >= (m+3)/2 (m={m}, c={c}, a={cert.a})")
    if mu == 0:
        return ctx.zero
    s = ctx.one if cert.right_angle else ctx.sin(ctx.convert(cert.theta0))
    weight = to_big(gamma_weighted_power_sum(m), ctx)
    const = mu * ctx.power(2 + s, lam) * weight / ((2 * m + 1) * expo * ctx.power(2 * s, 2 * m))
    base = c + a - ctx.mpf(m) / 2 - ctx.mpf(1) / 2
    return const / ctx.power(base, expo)


def em_remainder_bound(cert, m, c, prec=None):
    """Remainder bound of the shifted Euler-Maclaurin sum, ``m >= 4``.

        2.02 mu 3^lam / (2m-2-lam) (2m-1)! / (2 pi)^(2m-1) / (c + a)^(2m-2-lam)
    """
    _require_right_angle(cert)
    ctx = _ctx(prec)
    if m < 4:
        raise ArgumentError("the Euler-Maclaurin bound needs m >= 4")
    lam, mu, a = _real(cert.lam, ctx), _real(cert.mu, ctx), _real(cert.a, ctx)
    expo = 2 * m - 2 - lam
    if expo <= 0:
        raise ArgumentError(f"need lam < 2m - 2 (m={m}, lam={cert.lam})")
    if c + a <= 0:
        raise ArgumentError(f"need c + a > 0 (c={c}, a={cert.a})")
    if mu == 0:
        return ctx.zero
    front = ctx.mpf("2.02") * mu * ctx.power(3, lam) / expo
    return front * ctx.factorial(2 * m - 1) / ctx.power(2 * ctx.pi, 2 * m - 1) / ctx.power(c + a, expo)


def euler_alt_bound(m, c, prec=None):
    """Sharper Alt bound for ``1/(x+1)``: needs ``m >= 2`` and ``c > (m-1)/2``."""
    ctx = _ctx(prec)
    if m < 2:
        raise ArgumentError("need m >= 2")
    if 2 * c <= m - 1:
        raise ArgumentError(f"need c > (m-1)/2 (m={m}, c={c})")
    base = c - ctx.mpf(m) / 2 + ctx.mpf(1) / 2
    front = ctx.mpf("1.001") * ctx.pi / ((2 * m + 1) * 2 * m)
    return front * ctx.power(lambda_star(ctx) / 4, m) * ctx.power(m, 2 * m + 1) / ctx.power(base, 2 * m)


def euler_em_bound(m, c, prec=None):
    """Sharper Euler-Maclaurin bound for ``1/(x+1)``: needs ``m >= 4``."""
    ctx = _ctx(prec)
    if m < 4:
        raise ArgumentError("need m >= 4")
    if c < 0:
        raise ArgumentError("need c >= 0")
    return ctx.mpf("2.02") * ctx.factorial(2 * m - 2) / (
        ctx.power(2 * ctx.pi, 2 * m - 1) * ctx.power(c + 1, 2 * m - 1)
    )


def euler_special_bounds(m, c, prec=None):
    """Both sharper bounds for ``1/(x+1)`` as an ``(alt, em)`` pair."""
    return euler_alt_bound(m, c, prec), euler_em_bound(m, c, prec)


def bound_from_M(M, m, prec=None):
    """``M / ((2m+1)! 4^m) sum |gamma_j| j^(2m+1)`` for a caller-supplied
    bound ``M`` on the 2m-th derivative integral."""
    ctx = _ctx(prec)
    M = _real(M, ctx)
    if M < 0:
        raise ArgumentError("M must be nonnegative")
    weight = Fraction(gamma_weighted_power_sum(m), math.factorial(2 * m + 1) * 4**m)
    return M * to_big(weight, ctx)


def typical_order(d):
    """``m = 2 ceil(0.265 d)``, the order for the typical cost case."""
    return 2 * (-(-53 * d // 200))


def _even_ceiling(x, ctx):
    return 2 * int(ctx.ceil(x / 2))


def cost_optimal_order(d, omega, prec=None):
    """Even order ``2 ceil(m_w / 2)``, ``m_w = ln 10 / (1 + W(1/(e w))) d / 2``."""
    ctx = _ctx(prec)
    omega = ctx.convert(omega)
    if omega <= 0:
        raise ArgumentError("omega must be positive")
    w = lambert_w(1 / (ctx.e * omega), ctx)
    return max(2, _even_ceiling(ctx.ln(10) / (1 + w) * d / 2, ctx))


def em_order(d, eps=0.5, prec=None):
    """Smallest even ``m >= max(4, d / (2 (1 + eps) log10 d))``."""
    ctx = _ctx(prec)
    if d <= 1:
        return 4
    raw = ctx.mpf(d) / (2 * (1 + ctx.convert(eps)) * ctx.log10(d))
    return max(4, _even_ceiling(raw, ctx))


def _finish(d, m, c, bound_fn, engine, ctx):
    target = _target(d, ctx)
    bound = bound_fn(m, c)
    while bound > target:
        c += 1
        bound = bound_fn(m, c)
    return SummationPlan(d=d, m=m, c=c, d1=d + guard_digits(d, m, c), bound=bound, engine=engine)


def _check_override_m(m):
    if not isinstance(m, int) or m < 2 or m % 2:
        raise ArgumentError(f"order m must be an even integer >= 2, got {m!r}")


def _check_digits(d, least=6):
    if not isinstance(d, int) or d < least:
        raise ArgumentError(f"digits must be an integer >= {least}, got {d!r}")


def _checked_override(d, m, c, bound_fn, engine, ctx):
    bound = bound_fn(m, c)
    if bound > _target(d, ctx):
        raise PlanningError(
            f"shift c={c} is too small for {d} digits at m={m}: bound {ctx.nstr(bound, 5)}"
        )
    return SummationPlan(d=d, m=m, c=c, d1=d + guard_digits(d, m, c), bound=bound, engine=engine)


def plan_alt(d, cert, costs=None, m=None, c=None, min_m=2, prec=None):
    """Plan for the Alt engine.

    Parameters
    ----------
    d : int
        Target digits, at least 6.
    cert : AnalyticityCertificate
    costs : CostModel, optional
        ``None`` selects the typical-case order ``2 ceil(0.265 d)``;
        an explicit model selects the cost-optimal order via Lambert W.
    m, c : int, optional
        Overrides.  An overridden shift must already meet the target.
    min_m : int
        Smallest acceptable order, e.g. ``spec.m0 + 1``.
    """
    _check_digits(d)
    ctx = _ctx(prec)
    lam, a = _real(cert.lam, ctx), _real(cert.a, ctx)
    if m is None:
        if costs is None:
            m = typical_order(d)
        else:
            K = costs.T_f / 2 + costs.T_tau + 2 * costs.T_F
            m = cost_optimal_order(d, kappa(ctx) * costs.T_f / K)
        m = max(m, min_m + (min_m % 2))
        while lam >= 2 * m - 1:
            m += 2
            if m > 64 * d:
                raise PlanningError(f"no admissible order up to 64d for lam={cert.lam}")
    else:
        _check_override_m(m)
        if m < min_m:
            raise ArgumentError(f"order m={m} is below the required minimum {min_m}")
        if lam >= 2 * m - 1:
            raise ArgumentError(f"order m={m} needs lam < 2m - 1 (lam={cert.lam})")
    sector = int(ctx.ceil(ctx.mpf(m + 3) / 2 - a))

    def bound_fn(mm, cc):
        return alt_remainder_bound(cert, mm, cc, prec)

    if c is not None:
        if c < max(1, sector):
            raise ArgumentError(f"shift c={c} violates c + a >= (m+3)/2")
        return _checked_override(d, m, c, bound_fn, "alt", ctx)
    expo = 2 * m - 1 - lam
    mu = _real(cert.mu, ctx)
    if mu == 0:
        c = max(1, sector)
    else:
        top = 2 * ctx.mpf(10) ** d * _coefficient_excess(m, ctx) * ctx.pi * mu * ctx.power(3, lam)
        top *= ctx.power(kappa(ctx), 2 * m) * ctx.power(m, 2 * m + 1) / ((2 * m + 1) * expo)
        root = ctx.mpf(m + 1) / 2 - a + ctx.power(top, 1 / expo)
        c = max(1, sector, int(ctx.ceil(root)))
    return _finish(d, m, c, bound_fn, "alt", ctx)


def plan_em(d, cert, costs=None, m=None, c=None, min_m=2, prec=None):
    """Plan for the Euler-Maclaurin engine (``m >= 4``, even)."""
    _check_digits(d)
    ctx = _ctx(prec)
    lam, a = _real(cert.lam, ctx), _real(cert.a, ctx)
    eps = 0.5 if costs is None else costs.eps
    if m is None:
        m = max(em_order(d, eps), min_m + (min_m % 2))
        while lam >= 2 * m - 2:
            m += 2
            if m > 64 * d:
                raise PlanningError(f"no admissible order up to 64d for lam={cert.lam}")
    else:
        _check_override_m(m)
        if m < max(4, min_m):
            raise ArgumentError(f"order m={m} is below the required minimum {max(4, min_m)}")
        if lam >= 2 * m - 2:
            raise ArgumentError(f"order m={m} needs lam < 2m - 2 (lam={cert.lam})")
    least = max(1, int(ctx.floor(-a)) + 1)

    def bound_fn(mm, cc):
        return em_remainder_bound(cert, mm, cc, prec)

    if c is not None:
        if c < least:
            raise ArgumentError(f"shift c={c} violates c + a > 0")
        return _checked_override(d, m, c, bound_fn, "em", ctx)
    expo = 2 * m - 2 - lam
    mu = _real(cert.mu, ctx)
    if mu == 0:
        c = least
    else:
        top = 2 * ctx.mpf(10) ** d * ctx.mpf("2.02") * mu * ctx.power(3, lam)
        top *= ctx.factorial(2 * m - 1) / (expo * ctx.power(2 * ctx.pi, 2 * m - 1))
        c = max(least, int(ctx.ceil(ctx.power(top, 1 / expo) - a)))
    return _finish(d, m, c, bound_fn, "em", ctx)


def plan_euler_alt(d, m=None, c=None, prec=None):
    """Plan for Euler's constant with the sharper logarithmic bound.

    The order uses ``omega = kappa / (10 sqrt(d))``, reflecting that a
    logarithm costs about ``10 sqrt(d)`` reciprocals.
    """
    _check_digits(d, least=1)
    ctx = _ctx(prec)
    if m is None:
        m = cost_optimal_order(d, kappa(ctx) / (10 * ctx.sqrt(d)))
    else:
        _check_override_m(m)

    def bound_fn(mm, cc):
        return euler_alt_bound(mm, cc, prec)

    least = (m + 4) // 2  # c >= (m+3)/2 also implies c > (m-1)/2
    if c is not None:
        if c < least:
            raise ArgumentError(f"shift c={c} must be at least (m+3)/2")
        return _checked_override(d, m, c, bound_fn, "alt", ctx)
    top = 2 * ctx.mpf(10) ** d * ctx.mpf("1.001") * ctx.pi
    top *= ctx.power(kappa(ctx), 2 * m) * ctx.power(m, 2 * m + 1) / ((2 * m + 1) * 2 * m)
    root = ctx.mpf(m - 1) / 2 + ctx.power(top, ctx.mpf(1) / (2 * m))
    return _finish(d, m, max(least, int(ctx.ceil(root))), bound_fn, "alt", ctx)


def plan_euler_em(d, m=None, c=None, eps=0.5, prec=None):
    """Euler-Maclaurin plan for Euler's constant with the sharper bound."""
    _check_digits(d, least=1)
    ctx = _ctx(prec)
    if m is None:
        m = em_order(d, eps)
    else:
        _check_override_m(m)
        if m < 4:
            raise ArgumentError("the Euler-Maclaurin path needs m >= 4")

    def bound_fn(mm, cc):
        return euler_em_bound(mm, cc, prec)

    if c is not None:
        return _checked_override(d, m, c, bound_fn, "em", ctx)
    top = 2 * ctx.mpf(10) ** d * ctx.mpf("2.02") * ctx.factorial(2 * m - 2)
    top /= ctx.power(2 * ctx.pi, 2 * m - 1)
    root = ctx.power(top, ctx.mpf(1) / (2 * m - 1)) - 1
    return _finish(d, m, max(1, int(ctx.ceil(root))), bound_fn, "em", ctx)
