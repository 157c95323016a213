"""Summand specifications: f, an antiderivative F, optional derivatives,
and a growth certificate on a right half-plane sector.

Evaluators share one calling convention, ``fn(x, ctx)`` returning a
sequence of ``q`` components.  ``ctx`` is the ``mpmath.MPContext`` of the
running computation and ``x`` is one of its reals.  In exact mode ``ctx``
is ``None`` and ``x`` is a ``Fraction``; only polynomial test specs
support that mode.  Derivative oracles take ``(x, order, ctx)``.

Evaluators must be pure, because parallel workers call them concurrently.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math
import random
from typing import Callable, Optional

import mpmath

from .errors import ArgumentError, DomainError, PoleError, SpotCheckError
from .numerics import to_big, working_context

__all__ = [
    "AnalyticityCertificate",
    "FunctionSpec",
    "power_family",
    "reciprocal_spec",
    "sqrt_example_spec",
    "custom_spec",
    "shift_spec",
    "parse_complex",
    "BUILTINS",
]

RIGHT_ANGLE = math.pi / 2


@dataclass(frozen=True)
class AnalyticityCertificate:
    """Asserted growth bound ``|f(z)| <= mu |z + a + 1|**lam`` on the sector
    ``{-a + r e^{i t}: r >= 0, |t| <= theta0}``.

    The engines trust the certificate; nothing here verifies it.
    """

    a: object
    lam: object
    mu: object
    theta0: float = RIGHT_ANGLE

    def __post_init__(self):
        # values from private contexts are rebound to the global mpf type
        # (same bits) so that certificates pickle into process pools
        for name in ("a", "lam", "mu"):
            value = getattr(self, name)
            if hasattr(value, "_mpf_") and type(value) is not mpmath.mpf:
                object.__setattr__(self, name, mpmath.mp.make_mpf(value._mpf_))
        if self.lam < 0:
            raise ArgumentError("growth exponent lam must be nonnegative")
        if self.mu < 0:
            raise ArgumentError("growth constant mu must be nonnegative")
        if not 0 < self.theta0 <= RIGHT_ANGLE + 1e-15:
            raise ArgumentError("sector half-angle must lie in (0, pi/2]")

    @property
    def right_angle(self):
        return abs(self.theta0 - RIGHT_ANGLE) < 1e-12


@dataclass(frozen=True)
class FunctionSpec:
    """A (possibly vector-valued) summand with its antiderivative.

    Attributes
    ----------
    f, F : callable
        ``(x, ctx) -> sequence`` of length ``q``.
    cert : AnalyticityCertificate
    m0 : int
        Minimal stabilizer order; must satisfy ``2 m0 > 1 + lam``.
    q : int
        Number of components.
    odd_derivatives : callable or None
        ``(x, order, ctx) -> sequence``; required by the Euler-Maclaurin engine.
    name : str
    """

    f: Callable
    F: Callable
    cert: AnalyticityCertificate
    m0: int
    q: int = 1
    odd_derivatives: Optional[Callable] = None
    name: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not isinstance(self.m0, int) or self.m0 < 1:
            raise ArgumentError("m0 must be a positive integer")
        if 2 * self.m0 <= 1 + self.cert.lam:
            raise ArgumentError(
                f"m0={self.m0} is too small for growth exponent {self.cert.lam}: need 2*m0 > 1 + lam"
            )
        if self.q < 1:
            raise ArgumentError("component count q must be positive")

    @property
    def has_derivatives(self):
        return self.odd_derivatives is not None


def parse_complex(value):
    """Exact ``(re, im)`` pair of Fractions from a number or a string.

    Strings accept ``i`` or ``j`` as the imaginary unit, e.g. ``"-1+i"``,
    ``"2.5-0.5j"``, ``"i"``.
    """
    if isinstance(value, tuple) and len(value) == 2:
        return Fraction(value[0]), Fraction(value[1])
    if isinstance(value, (int, Fraction)):
        return Fraction(value), Fraction(0)
    if isinstance(value, float):
        return Fraction(value), Fraction(0)
    if isinstance(value, complex):
        return Fraction(value.real), Fraction(value.imag)
    if isinstance(value, str):
        s = value.replace(" ", "").replace("J", "j").replace("I", "i")
        if not s:
            raise ArgumentError("empty complex literal")
        if s[-1] not in "ij":
            return Fraction(s), Fraction(0)
        body = s[:-1]
        # split at the last sign that is not an exponent sign
        k = len(body)
        while k > 0:
            k -= 1
            if body[k] in "+-" and (k == 0 or body[k - 1] not in "eE"):
                break
        else:
            k = 0
        re_part, im_part = body[:k], body[k:]
        if im_part in ("", "+"):
            im = Fraction(1)
        elif im_part == "-":
            im = Fraction(-1)
        else:
            im = Fraction(im_part)
        try:
            return Fraction(re_part) if re_part else Fraction(0), im
        except ValueError as exc:
            raise ArgumentError(f"cannot parse complex literal {value!r}") from exc
    if hasattr(value, "real") and hasattr(value, "imag"):
        return Fraction(float(value.real)), Fraction(float(value.imag))
    raise ArgumentError(f"cannot interpret {value!r} as a complex number")


def _big_complex(pair, ctx):
    # real parameters stay real; mpmath switches to the principal complex
    # branch by itself when a negative base meets a fractional exponent
    if pair[1] == 0:
        return to_big(pair[0], ctx)
    return ctx.mpc(to_big(pair[0], ctx), to_big(pair[1], ctx))


def _format_pair(pair):
    re_, im = pair
    if im == 0:
        return str(re_)
    sign = "+" if im >= 0 else "-"
    return f"{re_}{sign}{abs(im)}i"


# Builtin evaluators are small callable classes so that specs pickle
# cleanly into process pools.


@dataclass(frozen=True)
class _PowerSummand:
    exponents: tuple
    delta: tuple

    def __call__(self, x, ctx):
        z = x + _big_complex(self.delta, ctx)
        return [ctx.power(z, -_big_complex(p, ctx)) for p in self.exponents]


@dataclass(frozen=True)
class _PowerAntiderivative:
    exponents: tuple
    delta: tuple

    def __call__(self, x, ctx):
        z = x + _big_complex(self.delta, ctx)
        out = []
        for p in self.exponents:
            s = 1 - _big_complex(p, ctx)
            out.append(ctx.power(z, s) / s)
        return out


@dataclass(frozen=True)
class _PowerDerivative:
    exponents: tuple
    delta: tuple

    def __call__(self, x, order, ctx):
        z = x + _big_complex(self.delta, ctx)
        out = []
        for p in self.exponents:
            p = _big_complex(p, ctx)
            # d^k/dx^k z^{-p} = (-1)^k p (p+1) ... (p+k-1) z^{-p-k}
            rising = ctx.one
            for i in range(order):
                rising *= p + i
            term = rising * ctx.power(z, -p - order)
            out.append(-term if order % 2 else term)
        return out


def power_family(p_list, delta=1, cert_margin=None):
    """Vector Hurwitz family ``f_k(x) = (x + delta)**(-p_k)``.

    Parameters
    ----------
    p_list : sequence of complex (or a single exponent)
        Exponents; none may equal 1.  Strings like ``"-1+i"`` are parsed
        exactly.
    delta : complex
        Shift, off the closed negative real axis.
    cert_margin : real, optional
        Sector vertex offset ``a``; must not exceed ``Re delta - 1``,
        which is also the default.

    Returns
    -------
    FunctionSpec
        With ``F_k(x) = (x + delta)**(1 - p_k) / (1 - p_k)`` on the
        principal branch and the closed-form derivative oracle.
    """
    if isinstance(p_list, (str, int, float, complex, Fraction)):
        p_list = [p_list]
    exponents = tuple(parse_complex(p) for p in p_list)
    if not exponents:
        raise ArgumentError("need at least one exponent")
    for p in exponents:
        if p == (1, 0):
            raise PoleError("exponent p = 1 is a pole of the antiderivative")
    shift = parse_complex(delta)
    if shift[1] == 0 and shift[0] <= 0:
        raise DomainError("delta must not lie on the closed negative real axis")
    a = shift[0] - 1 if cert_margin is None else Fraction(cert_margin)
    if a > shift[0] - 1:
        raise ArgumentError("cert_margin must not exceed Re(delta) - 1")

    ctx = working_context(40)
    dist = abs(_big_complex(shift, ctx) - to_big(a, ctx) - 1)
    mu = ctx.zero
    lam = Fraction(0)
    for re_p, im_p in exponents:
        mu_k = ctx.exp(ctx.pi * abs(to_big(im_p, ctx)) / 2)
        if re_p < 0:
            mu_k *= ctx.power(1 + dist, to_big(-re_p, ctx))
            lam = max(lam, -re_p)
        mu = max(mu, mu_k)
    min_re = min(p[0] for p in exponents)
    m0 = max(1, math.floor(1 - min_re / 2) + 1)

    cert = AnalyticityCertificate(a=a, lam=lam, mu=mu)
    label = ",".join(_format_pair(p) for p in exponents)
    return FunctionSpec(
        f=_PowerSummand(exponents, shift),
        F=_PowerAntiderivative(exponents, shift),
        odd_derivatives=_PowerDerivative(exponents, shift),
        cert=cert,
        m0=m0,
        q=len(exponents),
        name=f"power[p={label};delta={_format_pair(shift)}]",
        params={"p": exponents, "delta": shift},
    )


def _reciprocal_f(x, ctx):
    return [1 / (x + 1)]


def _reciprocal_F(x, ctx):
    if ctx is None:
        raise ArgumentError("the logarithmic antiderivative has no exact mode")
    return [ctx.ln(x + 1)]


def _reciprocal_derivative(x, order, ctx):
    y = x + 1
    value = math.factorial(order) / y ** (order + 1)
    return [-value if order % 2 else value]


def reciprocal_spec():
    """``f(x) = 1/(x+1)``, ``F(x) = ln(x+1)``; its generalized sum is Euler's constant."""
    return FunctionSpec(
        f=_reciprocal_f,
        F=_reciprocal_F,
        odd_derivatives=_reciprocal_derivative,
        cert=AnalyticityCertificate(a=0, lam=0, mu=1),
        m0=1,
        name="reciprocal",
    )


def _sqrt_f(x, ctx):
    return [3 * x**3 / ctx.sqrt(x * x + 1)]


def _sqrt_F(x, ctx):
    return [(x * x - 2) * ctx.sqrt(x * x + 1)]


def sqrt_example_spec():
    """Divergent example ``f(x) = 3x^3 / sqrt(x^2+1)``.

    ``F(x) = (x^2 - 2) sqrt(x^2 + 1)``.  There is no derivative oracle, so
    the Euler-Maclaurin engine refuses this spec.
    """
    ctx = working_context(40)
    return FunctionSpec(
        f=_sqrt_f,
        F=_sqrt_F,
        cert=AnalyticityCertificate(a=-2, lam=2, mu=24 / ctx.sqrt(5)),
        m0=2,
        name="sqrt-example",
    )


class _Vectorized:
    """Wraps a scalar-valued evaluator into the sequence convention."""

    def __init__(self, fn):
        self.fn = fn

    def __call__(self, *args):
        return [self.fn(*args)]


def _is_sequence(value):
    return isinstance(value, (list, tuple))


def _spot_check(f, F, q, digits, seed):
    ctx = working_context(digits)
    h = ctx.mpf(10) ** (-(digits // 3))
    tol = ctx.mpf(10) ** (-(digits // 2))
    rng = random.Random(seed)
    for _ in range(3):
        x = ctx.mpf(rng.randint(0, 10**6)) / 10**5
        fx = f(x, ctx)
        diff = [(b - a) / (2 * h) for a, b in zip(F(x - h, ctx), F(x + h, ctx))]
        if len(fx) != q or len(diff) != q:
            raise SpotCheckError(f"f and F disagree on the component count at x = {x}")
        for k, (u, v) in enumerate(zip(fx, diff)):
            if abs(u - v) > tol * max(1, abs(u)):
                raise SpotCheckError(
                    f"F' != f at x = {ctx.nstr(x, 8)} (component {k}): "
                    f"f = {ctx.nstr(u, 12)}, central difference = {ctx.nstr(v, 12)}"
                )


def custom_spec(f, F, cert, m0, odd_derivatives=None, name="custom", check_digits=30, seed=0):
    """Wrap user evaluators into a :class:`FunctionSpec`.

    Scalar-valued evaluators are accepted and wrapped.  The antiderivative
    is spot-checked against `f` by a central difference at three random
    points of ``[0, 10]``; a mismatch raises :class:`SpotCheckError`.
    """
    probe_ctx = working_context(check_digits)
    probe = f(probe_ctx.mpf(1), probe_ctx)
    if not _is_sequence(probe):
        f, F = _Vectorized(f), _Vectorized(F)
        if odd_derivatives is not None:
            odd_derivatives = _Vectorized(odd_derivatives)
        q = 1
    else:
        q = len(probe)
    _spot_check(f, F, q, check_digits, seed)
    return FunctionSpec(f=f, F=F, cert=cert, m0=m0, q=q, odd_derivatives=odd_derivatives, name=name)


@dataclass(frozen=True)
class _Shifted:
    fn: Callable
    shift: int

    def __call__(self, x, *rest):
        return self.fn(x + self.shift, *rest)


def shift_spec(spec, c):
    """The spec of ``f_c(x) = f(x + c)``, with the sector vertex moved accordingly."""
    cert = spec.cert
    shifted_cert = AnalyticityCertificate(a=cert.a + c, lam=cert.lam, mu=cert.mu, theta0=cert.theta0)
    deriv = None if spec.odd_derivatives is None else _Shifted(spec.odd_derivatives, c)
    return FunctionSpec(
        f=_Shifted(spec.f, c),
        F=_Shifted(spec.F, c),
        cert=shifted_cert,
        m0=spec.m0,
        q=spec.q,
        odd_derivatives=deriv,
        name=f"{spec.name}+{c}",
    )


BUILTINS = {
    "power": power_family,
    "reciprocal": reciprocal_spec,
    "sqrt-example": sqrt_example_spec,
}
