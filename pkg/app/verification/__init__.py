from .models import OracleReport, OracleTolerances, tolerances
from .oracles import (
    containment_check, direction_constraint_sampler, fd_gradient_oracle, gradient_oracle_suite,
    line_integral_oracle, locate_partition_check, lyapunov_monotonicity_check, prop1_oracle, prop2_check,
)

__all__ = [
    "OracleReport", "OracleTolerances", "tolerances",
    "containment_check", "direction_constraint_sampler", "fd_gradient_oracle", "gradient_oracle_suite",
    "line_integral_oracle", "locate_partition_check", "lyapunov_monotonicity_check", "prop1_oracle",
    "prop2_check",
]
