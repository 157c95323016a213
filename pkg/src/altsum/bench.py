"""Desk-scale timing tables: one row per requested digit count."""

import resource
import time

from .alt_engine import euler_gamma, generalized_sum_alt
from .errors import ArgumentError
from .functions import power_family, sqrt_example_spec
from .parallel import parallel_generalized_sum
from .planner import plan_alt

__all__ = ["SUITES", "run_suite"]

VECTOR_EXPONENTS = ("-1+i", "i", "1+i", "2+i")


def _generic(spec, d, workers):
    plan = plan_alt(d, spec.cert, min_m=spec.m0 + 1)
    if workers > 1:
        return parallel_generalized_sum(spec, plan, workers=workers)
    return generalized_sum_alt(spec, plan)


def _sqrt(d, workers):
    return _generic(sqrt_example_spec(), d, workers)


def _zeta(d, workers):
    return _generic(power_family(VECTOR_EXPONENTS, "i"), d, workers)


def _euler(d, workers):
    return euler_gamma(d)


SUITES = {"sqrt": _sqrt, "zeta": _zeta, "euler": _euler}


def run_suite(suite, digits_list, workers=1):
    """Time one suite.  Memory is the process peak resident size so far."""
    if suite not in SUITES:
        raise ArgumentError(f"unknown suite {suite!r}")
    rows = []
    for d in digits_list:
        start = time.perf_counter()
        result = SUITES[suite](d, workers)
        elapsed = time.perf_counter() - start
        rows.append(
            {
                "d": d,
                "m": result.m,
                "c": result.c,
                "time_s": elapsed,
                "peak_memory_bytes": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024,
                "value": result.value,
            }
        )
    return rows
