"""High-precision generalized sums from antiderivative values.

A series ``f(0) + f(1) + ...`` (convergent or not) is summed as
``f(0) + ... + f(c-1) - G(c)``, where the stabilizer ``G`` is a short
rational combination of values of an antiderivative F at half-integers.
An Euler-Maclaurin engine is included as an independent cross-check.
"""

from .alt_engine import (
    SumResult,
    approx_finite_sum,
    euler_gamma,
    generalized_sum_alt,
    stabilizer_G,
    weight_dump,
    weight_profile,
)
from .coefficients import (
    bernoulli_from_tau,
    bernoulli_numbers,
    gamma_table,
    gamma_weighted_power_sum,
    odd_power_cancellation,
    rho_downward,
    tau_table,
)
from .em_engine import (
    em_approx_finite_sum,
    euler_gamma_em,
    faulhaber_sum,
    generalized_sum_em,
    stabilizer_G_em,
)
from .errors import (
    AccuracyError,
    AltSumError,
    ArgumentError,
    CapabilityError,
    DomainError,
    PartitionError,
    PlanningError,
    PoleError,
    SpotCheckError,
)
from .functions import (
    AnalyticityCertificate,
    FunctionSpec,
    custom_spec,
    power_family,
    reciprocal_spec,
    sqrt_example_spec,
)
from .parallel import assemble, make_partition, parallel_generalized_sum, worker_pass
from .planner import CostModel, SummationPlan, plan_alt, plan_em

__version__ = "0.1.0"
