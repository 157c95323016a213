"""Exact rational coefficients of the antiderivative summation formula.

For an order ``m`` the weights are

    gamma[j] = (-1)**(j-1) * (2/j) * C(2m, m+j) / C(2m, m),   j = 1..m
    tau[r]   = gamma[r] + gamma[r+2] + gamma[r+4] + ...
    rho[j]   = j * gamma[j]

All tables are tuples of ``Fraction`` indexed from 0 (entry ``j-1``
holds the value for ``j``) and are cached per order.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
import threading

from .errors import ArgumentError

__all__ = [
    "CoefficientTable",
    "BernoulliCache",
    "gamma_table",
    "tau_table",
    "rho_downward",
    "coefficient_table",
    "bernoulli_numbers",
    "bernoulli_from_tau",
    "gamma_weighted_power_sum",
    "odd_power_cancellation",
]


def _check_order(m):
    if not isinstance(m, int) or m < 1:
        raise ArgumentError(f"order m must be a positive integer, got {m!r}")


@lru_cache(maxsize=None)
def _central_binomials(m):
    # C(2m, m+j) for j = 0..m by incremental multiplication
    row = [comb(2 * m, m)]
    for j in range(1, m + 1):
        row.append(row[-1] * (m - j + 1) // (m + j))
    return tuple(row)


@lru_cache(maxsize=None)
def gamma_table(m):
    """Weights ``gamma_{m,1..m}``."""
    _check_order(m)
    row = _central_binomials(m)
    centre = row[0]
    return tuple(
        Fraction((-1) ** (j - 1) * 2 * row[j], j * centre) for j in range(1, m + 1)
    )


@lru_cache(maxsize=None)
def tau_table(m):
    """Tail sums ``tau_{m,r} = sum_{beta >= 0} gamma_{m, r+2 beta}``.

    One reverse pass with two running tails, one per parity.
    """
    gamma = gamma_table(m)
    tails = [Fraction(0), Fraction(0)]
    out = [None] * m
    for j in range(m, 0, -1):
        tails[j % 2] += gamma[j - 1]
        out[j - 1] = tails[j % 2]
    return tuple(out)


@lru_cache(maxsize=None)
def rho_downward(m):
    """``rho_{m,j} = j gamma_{m,j}`` from the downward recursion.

    Starts at ``rho_{m,m} = (-1)**(m-1) 2 / C(2m, m)`` and steps with
    ``rho_{m,j-1} = rho_{m,j} (m+j) / (j-m-1)``.
    """
    _check_order(m)
    out = [None] * m
    r = Fraction((-1) ** (m - 1) * 2, comb(2 * m, m))
    out[m - 1] = r
    for j in range(m, 1, -1):
        r = r * (m + j) / (j - m - 1)
        out[j - 2] = r
    return tuple(out)


@dataclass(frozen=True)
class CoefficientTable:
    """All three coefficient rows for one order ``m``."""

    m: int
    gamma: tuple
    tau: tuple
    rho: tuple


def coefficient_table(m):
    return CoefficientTable(m, gamma_table(m), tau_table(m), rho_downward(m))


@dataclass(frozen=True)
class BernoulliCache:
    """Exact Bernoulli numbers ``B_0..B_N`` (with ``B_1 = -1/2``)."""

    values: tuple

    @property
    def N(self):
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]


_bernoulli = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli_numbers(N):
    """Bernoulli numbers up to index `N` from the classical recurrence.

    ``sum_{a=0}^{b-1} C(b, a) B_a = 0`` for ``b >= 2`` is solved for
    ``B_{b-1}``.  The list grows lazily and is shared across calls.
    """
    if N < 0:
        raise ArgumentError("N must be nonnegative")
    with _bernoulli_lock:
        while len(_bernoulli) <= N:
            n = len(_bernoulli)
            if n > 1 and n % 2 == 1:
                _bernoulli.append(Fraction(0))
                continue
            b = n + 1
            acc = sum(comb(b, a) * _bernoulli[a] for a in range(n) if _bernoulli[a])
            _bernoulli.append(-acc / b)
        return BernoulliCache(tuple(_bernoulli[: N + 1]))


def bernoulli_from_tau(m, p):
    """``B_p`` rebuilt from the tail sums of order `m`, ``0 <= p <= 2m-1``.

    Uses the convention ``0**0 = 1``.
    """
    _check_order(m)
    if not 0 <= p <= 2 * m - 1:
        raise ArgumentError(f"p must lie in 0..{2 * m - 1}, got {p}")
    tau = tau_table(m)
    total = tau[0] * (-1) ** p
    for beta in range(2, m + 1):
        total += tau[beta - 1] * ((beta - 2) ** p + (-beta) ** p)
    return total / 2**p


def gamma_weighted_power_sum(m):
    """``sum_j |gamma_{m,j}| j^(2m+1)``, the constant of the remainder estimate."""
    gamma = gamma_table(m)
    return sum(abs(g) * j ** (2 * m + 1) for j, g in enumerate(gamma, 1))


def odd_power_cancellation(m, q):
    """``sum_j gamma_{m,j} j^q`` for odd ``1 <= q <= 2m-1``; equals ``[q == 1]``.

    Summed over the common denominator ``C(2m, m)`` so that only integer
    arithmetic appears in the loop.
    """
    _check_order(m)
    if q % 2 == 0 or not 1 <= q <= 2 * m - 1:
        raise ArgumentError(f"q must be odd in 1..{2 * m - 1}, got {q}")
    row = _central_binomials(m)
    total = 0
    for j in range(1, m + 1):
        term = row[j] * j ** (q - 1)
        total += term if j % 2 else -term
    return Fraction(2 * total, row[0])
