"""Schur multiplier norms on spaces of operators between l_p spaces."""

from .core import (INF, Exponent, ExponentPair, InconsistencyError, RegimeError, as_exponent,
                   as_pair, conjugate, hadamard, holder_extremizer, lp_norm)
from .discretize import (KernelSpec, Partition, StepFunction, coarsen_matrix,
                         conditional_expectation, constant_kernel, discretize_kernel,
                         gaussian_kernel, grid_kernel, lift_operator, merge_partition,
                         partition_isometry, partition_isometry_inverse, product_kernel,
                         signstep_kernel, uniform_partition)
from .experiments import (ExperimentReport, explore_open_problem, hilbert_witness,
                          run_inclusion_check, run_kernel_growth, run_triangle_growth,
                          triangle_matrix)
from .opnorm import (NormEstimate, SearchConfig, opnorm, opnorm_exact, opnorm_hull_upper,
                     opnorm_interp_upper, opnorm_oracle, opnorm_power_lower, opnorm_upper,
                     power_iteration)
from .schur import (DominatedScaling, DualityReport, FactorizationCertificate,
                    FactorizationError, certificate_upper, certificate_value,
                    compose_certificates, dominated_norm, duality_report, factorization_solve,
                    lpq_lower, multiplier_norm_lower)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "Exponent",
    "ExponentPair",
    "InconsistencyError",
    "RegimeError",
    "as_exponent",
    "as_pair",
    "conjugate",
    "hadamard",
    "holder_extremizer",
    "lp_norm",
    "KernelSpec",
    "Partition",
    "StepFunction",
    "coarsen_matrix",
    "conditional_expectation",
    "constant_kernel",
    "discretize_kernel",
    "gaussian_kernel",
    "grid_kernel",
    "lift_operator",
    "merge_partition",
    "partition_isometry",
    "partition_isometry_inverse",
    "product_kernel",
    "signstep_kernel",
    "uniform_partition",
    "ExperimentReport",
    "explore_open_problem",
    "hilbert_witness",
    "run_inclusion_check",
    "run_kernel_growth",
    "run_triangle_growth",
    "triangle_matrix",
    "NormEstimate",
    "SearchConfig",
    "opnorm",
    "opnorm_exact",
    "opnorm_hull_upper",
    "opnorm_interp_upper",
    "opnorm_oracle",
    "opnorm_power_lower",
    "opnorm_upper",
    "power_iteration",
    "DominatedScaling",
    "DualityReport",
    "FactorizationCertificate",
    "FactorizationError",
    "certificate_upper",
    "certificate_value",
    "compose_certificates",
    "dominated_norm",
    "duality_report",
    "factorization_solve",
    "lpq_lower",
    "multiplier_norm_lower",
]
