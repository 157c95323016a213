"""Arbitrary-precision arithmetic shared by the engines.

Reals and complexes are ``mpf``/``mpc`` values owned by a private
``mpmath.MPContext``.  Each computation builds its own context, so
concurrent workers never touch the global ``mpmath.mp`` precision.
Exact coefficients are ``fractions.Fraction``.
"""

from dataclasses import dataclass
from fractions import Fraction
import math
from numbers import Rational

import mpmath
from mpmath import libmp

from .errors import ArgumentError, DomainError

__all__ = [
    "PrecisionPolicy",
    "working_context",
    "guard_digits",
    "to_big",
    "elementary",
    "lambert_w",
    "format_fixed",
    "format_bound",
    "raw_vector",
    "from_raw_vector",
]

_NAMES = ("ln", "exp", "sqrt", "pow", "abs", "arg")


@dataclass(frozen=True)
class PrecisionPolicy:
    """Target digits plus guard digits.

    Attributes
    ----------
    target : int
        Requested number of correct digits after the decimal point.
    guard : int
        Extra digits carried internally, at least 10.
    """

    target: int
    guard: int = 10

    def __post_init__(self):
        if self.target < 1:
            raise ArgumentError("target digits must be positive")
        if self.guard < 10:
            raise ArgumentError("guard digits must be at least 10")

    @property
    def working(self):
        return self.target + self.guard

    @classmethod
    def for_plan(cls, d, m, c):
        return cls(d, guard_digits(d, m, c))


def working_context(digits):
    """Fresh mpmath context carrying `digits` decimal digits."""
    if digits < 1:
        raise ArgumentError("precision must be a positive number of digits")
    ctx = mpmath.MPContext()
    ctx.dps = int(digits)
    return ctx


def guard_digits(d, m, c):
    """Guard digits ``10 + ceil(2 log10(d + m + c + 10))``.

    Computed in integers: ``ceil(2 log10 N)`` is the least k with
    ``N**2 <= 10**k``.
    """
    n = d + m + c + 10
    square = n * n
    k = len(str(square)) - 1
    if 10**k < square:
        k += 1
    return 10 + k


def to_big(r, ctx):
    """Correctly rounded conversion of an exact rational (or int) into `ctx`."""
    if isinstance(r, int):
        return ctx.make_mpf(libmp.from_int(r, ctx.prec, libmp.round_nearest))
    if isinstance(r, Rational):
        return ctx.make_mpf(
            libmp.from_rational(int(r.numerator), int(r.denominator), ctx.prec, libmp.round_nearest)
        )
    return ctx.convert(r)


def _is_real(x):
    return not isinstance(x, (complex, mpmath.mpc)) and not hasattr(x, "_mpc_")


def elementary(name, x, digits, p=None):
    """Evaluate an elementary function at `digits` decimal digits.

    Parameters
    ----------
    name : str
        One of ``ln``, ``exp``, ``sqrt``, ``pow``, ``abs``, ``arg``.
    x : real or complex
        Argument; plain numbers and ``Fraction`` are accepted.
    digits : int
        Working precision of the result.
    p : number, optional
        Exponent for ``pow``; the principal branch is used.
    """
    if name not in _NAMES:
        raise ArgumentError(f"unknown elementary function {name!r}")
    ctx = working_context(digits)
    real = _is_real(x)
    if isinstance(x, (Fraction, int)):
        z = to_big(x, ctx)
    elif real:
        z = ctx.mpf(x)
    else:
        z = ctx.mpc(x)
    if name == "ln":
        if z == 0 or (real and z < 0):
            raise DomainError("ln needs a positive real or a nonzero complex argument")
        return ctx.ln(z)
    if name == "exp":
        return ctx.exp(z)
    if name == "sqrt":
        if real and z < 0:
            raise DomainError("sqrt of a negative real")
        return ctx.sqrt(z)
    if name == "abs":
        return abs(z)
    if name == "arg":
        if z == 0:
            raise DomainError("arg of zero")
        return ctx.arg(z)
    if p is None:
        raise ArgumentError("pow needs an exponent")
    e = to_big(p, ctx) if isinstance(p, (Fraction, int)) else ctx.convert(p)
    if z == 0:
        if ctx.re(e) <= 0:
            raise DomainError("zero raised to a nonpositive power")
        return ctx.zero
    if real and z < 0 and _is_real(e):
        # principal branch of a negative base is complex
        z = ctx.mpc(z)
    return ctx.power(z, e)


def lambert_w(u, ctx):
    """Principal Lambert W on ``u >= 0``: the w >= 0 with ``w e^w = u``.

    Halley iteration from a double-precision seed.
    """
    u = ctx.convert(u)
    if u < 0:
        raise DomainError("lambert_w is only provided on the nonnegative axis")
    if u == 0:
        return ctx.zero
    uf = float(u) if u < 1e300 else math.inf
    if math.isinf(uf):
        lu = float(ctx.ln(u))
        seed = lu - math.log(lu)
    else:
        seed = math.log1p(uf) if uf < 3 else math.log(uf) - math.log(math.log(uf))
    w = ctx.mpf(seed)
    tol = ctx.ldexp(ctx.one, 8 - ctx.prec)
    for _ in range(200):
        ew = ctx.exp(w)
        f = w * ew - u
        wp1 = w + 1
        step = f / (ew * wp1 - (w + 2) * f / (2 * wp1))
        w -= step
        if abs(step) <= tol * (1 + abs(w)):
            break
    return w


def format_fixed(x, d, ctx=None):
    """Decimal string of real `x` with exactly `d` fractional digits (nearest)."""
    ctx = ctx or getattr(x, "context", None) or working_context(d + 20)
    scaled = ctx.nint(ctx.convert(x) * ctx.mpf(10) ** d)
    n = int(scaled)
    sign = "-" if n < 0 else ""
    digits = str(abs(n)).rjust(d + 1, "0")
    if d == 0:
        return sign + digits
    return f"{sign}{digits[:-d]}.{digits[-d:]}"


def format_bound(x, sig=6):
    """Scientific string for a nonnegative bound, rounded upward to `sig` digits."""
    if x == 0:
        return "0"
    ctx = working_context(sig + 20)
    x = ctx.convert(x)
    e = int(ctx.floor(ctx.log10(x)))
    mant = int(ctx.ceil(x * ctx.mpf(10) ** (sig - 1 - e)))
    if mant < 10 ** (sig - 1):
        e -= 1
        mant = int(ctx.ceil(x * ctx.mpf(10) ** (sig - 1 - e)))
    if mant >= 10**sig:
        mant = 10 ** (sig - 1)
        e += 1
    s = str(mant)
    return f"{s[0]}.{s[1:]}e{e}"


def raw_vector(values):
    """Context-free form of a vector of mpf/mpc values, safe to pickle."""
    out = []
    for v in values:
        if hasattr(v, "_mpc_"):
            out.append(("c", v._mpc_))
        else:
            out.append(("r", v._mpf_))
    return tuple(out)


def from_raw_vector(raw, ctx):
    """Rebuild values produced by :func:`raw_vector` inside `ctx`."""
    out = []
    for kind, data in raw:
        out.append(ctx.make_mpc(data) if kind == "c" else ctx.make_mpf(data))
    return out
