"""Multi-worker evaluation of the stabilizer and of the partial sum.

The coefficient range ``j = 1..m`` is cut into ``k*`` even blocks.  Worker
``k`` walks its block downward from ``j = m_k``, carrying the exact
recursion for ``rho_j = j gamma_j`` and running tails ``theta``, plus
four accumulators

    eta   = sum H_j,    sigma = sum theta_j H_j,
    H_j   = F(c - j/2) + F(c + j/2 - 1) [j >= 2]

separately for even and odd ``j``.  The master turns the ``k*`` theta
totals into the missing tail sums and reassembles ``G_{m,F}(c)`` with
O(k*) work.  Every combination runs in a fixed order, so results are
bit-for-bit reproducible for a given worker count.
"""

from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
import os
import time

from .alt_engine import SumResult, _check_plan, _context, _point, _stabilizer, partial_sum
from .errors import ArgumentError, PartitionError
from .numerics import from_raw_vector, raw_vector, to_big, working_context

__all__ = [
    "Partition",
    "WorkerOutput",
    "make_partition",
    "segment_product",
    "seed_values",
    "worker_pass",
    "assemble",
    "split_range",
    "parallel_generalized_sum",
]


@dataclass(frozen=True)
class Partition:
    """Even blocks ``(m_{k-1}, m_k]`` of the coefficient range.

    Attributes
    ----------
    workers : int
    lengths : tuple of int
        Block lengths, each even and at least 4.
    marks : tuple of int
        ``0 = m_0 < m_1 < ... < m_{k*} = m``.
    """

    workers: int
    lengths: tuple
    marks: tuple

    @property
    def m(self):
        return self.marks[-1]


@dataclass(frozen=True)
class WorkerOutput:
    """Terminal state of one worker: exact tails and four accumulators."""

    theta_ev: Fraction
    theta_od: Fraction
    eta_ev: tuple
    eta_od: tuple
    sigma_ev: tuple
    sigma_od: tuple


def make_partition(m, workers):
    """Canonical split: with ``q, r = divmod(m/2, k*)`` block k has length
    ``2(q + [k <= r])``."""
    if m % 2 or m < 2:
        raise ArgumentError(f"order m must be even and positive, got {m}")
    if workers < 1:
        raise ArgumentError("worker count must be positive")
    if m < 4 * workers:
        raise PartitionError(
            f"m={m} supports at most {m // 4} workers, {workers} requested", max_workers=m // 4
        )
    q, r = divmod(m // 2, workers)
    lengths = tuple(2 * (q + (k <= r)) for k in range(1, workers + 1))
    marks = tuple(2 * (k * q + min(k, r)) for k in range(workers + 1))
    return Partition(workers, lengths, marks)


def segment_product(k, partition, m):
    """``N_k``: product of ``(j - m - 1)/(m + j)`` over block k."""
    num, den = 1, 1
    for j in range(partition.marks[k - 1] + 1, partition.marks[k] + 1):
        num *= j - m - 1
        den *= m + j
    return Fraction(num, den)


def seed_values(products):
    """Prefix products ``-2 N_1 ... N_k``, i.e. ``rho_{m_k}`` for each block."""
    seeds, acc = [], Fraction(-2)
    for n in products:
        acc *= n
        seeds.append(acc)
    return seeds


def _helper(spec, c, j, ctx):
    lo = spec.F(_point(c - Fraction(j, 2), ctx), ctx)
    if j < 2:
        return list(lo)
    hi = spec.F(_point(c + Fraction(j, 2) - 1, ctx), ctx)
    return [u + v for u, v in zip(lo, hi)]


def _scale(w, vec, ctx):
    w = w if ctx is None else to_big(w, ctx)
    return [w * v for v in vec]


def worker_pass(k, partition, m, c, spec, prec, seed=None):
    """Run worker `k` (1-based) over its block.

    Parameters
    ----------
    seed : Fraction, optional
        ``rho_{m_k}``; computed from the block products when omitted.
    prec : int, context or None
        Working digits; ``None`` keeps the accumulators exact.
    """
    if not 1 <= k <= partition.workers:
        raise ArgumentError(f"worker index {k} outside 1..{partition.workers}")
    if partition.m != m:
        raise ArgumentError("partition does not match the order m")
    ctx = _context(prec)
    if seed is None:
        seed = seed_values([segment_product(i, partition, m) for i in range(1, k + 1)])[-1]
    top = partition.marks[k]
    steps = partition.lengths[k - 1] // 2

    rho_ev = seed
    rho_od = rho_ev * (m + top) / (top - m - 1)
    theta_ev = rho_ev / top
    theta_od = rho_od / (top - 1)
    h_ev = _helper(spec, c, top, ctx)
    h_od = _helper(spec, c, top - 1, ctx)
    eta_ev, eta_od = h_ev, h_od
    sigma_ev = _scale(theta_ev, h_ev, ctx)
    sigma_od = _scale(theta_od, h_od, ctx)
    for i in range(1, steps):
        j = top - 2 * i
        rho_ev = rho_od * (m + j + 1) / (j - m)
        rho_od = rho_ev * (m + j) / (j - m - 1)
        theta_ev += rho_ev / j
        theta_od += rho_od / (j - 1)
        h_ev = _helper(spec, c, j, ctx)
        h_od = _helper(spec, c, j - 1, ctx)
        eta_ev = [s + h for s, h in zip(eta_ev, h_ev)]
        eta_od = [s + h for s, h in zip(eta_od, h_od)]
        sigma_ev = [s + t for s, t in zip(sigma_ev, _scale(theta_ev, h_ev, ctx))]
        sigma_od = [s + t for s, t in zip(sigma_od, _scale(theta_od, h_od, ctx))]
    return WorkerOutput(theta_ev, theta_od, tuple(eta_ev), tuple(eta_od), tuple(sigma_ev), tuple(sigma_od))


def assemble(outputs, partition, prec):
    """Combine worker outputs into ``G_{m,F}(c)``.

    Missing tails come from suffix sums of the theta totals; the blocks
    are then added in increasing k.
    """
    if len(outputs) != partition.workers:
        raise ArgumentError(f"expected {partition.workers} worker outputs, got {len(outputs)}")
    ctx = _context(prec)
    tails_ev, tails_od = [None] * partition.workers, [None] * partition.workers
    acc_ev = acc_od = Fraction(0)
    for k in range(partition.workers - 1, -1, -1):
        tails_ev[k], tails_od[k] = acc_ev, acc_od
        acc_ev += outputs[k].theta_ev
        acc_od += outputs[k].theta_od

    def conv(vec):
        return list(vec) if ctx is None else [ctx.convert(v) for v in vec]

    total = None
    for k, out in enumerate(outputs):
        block = [
            a + s + b + t
            for a, s, b, t in zip(
                _scale(tails_ev[k], conv(out.eta_ev), ctx),
                conv(out.sigma_ev),
                _scale(tails_od[k], conv(out.eta_od), ctx),
                conv(out.sigma_od),
            )
        ]
        total = block if total is None else [u + v for u, v in zip(total, block)]
    return total


def split_range(lo, hi, parts):
    """``parts`` contiguous near-equal subranges of ``[lo, hi)``, larger ones first."""
    size, extra = divmod(hi - lo, parts)
    out, start = [], lo
    for i in range(parts):
        stop = start + size + (i < extra)
        out.append((start, stop))
        start = stop
    return out


# Task functions live at module level so that process pools can pickle
# them.  Values travel in raw (context-free) form.


def _range_task(spec, lo, hi, digits):
    return raw_vector(partial_sum(spec, lo, hi, working_context(digits)))


def _worker_task(k, partition, m, c, spec, digits, seed):
    out = worker_pass(k, partition, m, c, spec, digits, seed)
    return (
        out.theta_ev,
        out.theta_od,
        raw_vector(out.eta_ev),
        raw_vector(out.eta_od),
        raw_vector(out.sigma_ev),
        raw_vector(out.sigma_od),
    )


def _unpack(packed, ctx):
    th_ev, th_od, *vectors = packed
    return WorkerOutput(th_ev, th_od, *(tuple(from_raw_vector(v, ctx)) for v in vectors))


def _make_pool(backend, workers):
    if backend == "thread":
        return ThreadPoolExecutor(max_workers=workers)
    if backend == "process":
        return ProcessPoolExecutor(max_workers=workers)
    raise ArgumentError(f"unknown backend {backend!r}; use 'thread' or 'process'")


def parallel_generalized_sum(spec, plan, workers=None, backend="thread"):
    """Alt generalized sum with the partial sum and the stabilizer spread
    over `workers`.

    The stabilizer uses at most ``m // 4`` workers.  With one worker the
    serial code path runs unchanged, so the result is bit-identical to
    :func:`generalized_sum_alt`.  ``backend`` is ``"thread"`` or
    ``"process"``; the latter needs a picklable spec.
    """
    _check_plan(spec, plan, "alt")
    if workers is None:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise ArgumentError("worker count must be positive")
    start = time.perf_counter()
    ctx = working_context(plan.d1)
    m, c = plan.m, plan.c
    g_workers = min(workers, m // 4)

    if workers == 1:
        head = partial_sum(spec, 0, c, ctx)
        g = _stabilizer(spec, c, m, ctx)
    else:
        with _make_pool(backend, workers) as pool:
            ranges = [pool.submit(_range_task, spec, lo, hi, plan.d1) for lo, hi in split_range(0, c, workers)]
            g_futures = None
            if g_workers >= 1:
                partition = make_partition(m, g_workers)
                products = list(pool.map(segment_product, range(1, g_workers + 1), [partition] * g_workers, [m] * g_workers))
                seeds = seed_values(products)
                g_futures = [
                    pool.submit(_worker_task, k, partition, m, c, spec, plan.d1, seeds[k - 1])
                    for k in range(1, g_workers + 1)
                ]
            head = [ctx.zero] * spec.q
            for fut in ranges:
                head = [s + v for s, v in zip(head, from_raw_vector(fut.result(), ctx))]
            if g_futures is None:
                g = _stabilizer(spec, c, m, ctx)
            else:
                g = assemble([_unpack(f.result(), ctx) for f in g_futures], partition, ctx)

    value = tuple(ctx.mpc(s - t) for s, t in zip(head, g))
    return SumResult(
        value=value,
        d=plan.d,
        m=m,
        c=c,
        bound=plan.bound,
        elapsed=time.perf_counter() - start,
        method="alt-parallel" if workers > 1 else "alt-serial",
        d1=plan.d1,
        workers=workers,
    )
