from .smoothing import (
    SatSmoothParams, SmoothBumpParams, kappa, line_integral_lyapunov, s_smooth, s_smooth_prime,
    sat_vec, sigma, sigma_prime,
)
from .barriers import (
    BarrierParams, b_coefficient, barrier_vm, barrier_vm_prime, barrier_vt, clearance_gradient,
    keeping_gradient, modified_keeping_term,
)
from .panel import (
    ExtendedBoundary, PanelField, direction_margins, extend_boundaries, extended_boundary,
    interior_grid, keeping_potential, keeping_potential_gradient, panel_gradient, panel_potential,
)

__all__ = [
    "SatSmoothParams", "SmoothBumpParams", "kappa", "line_integral_lyapunov", "s_smooth",
    "s_smooth_prime", "sat_vec", "sigma", "sigma_prime",
    "BarrierParams", "b_coefficient", "barrier_vm", "barrier_vm_prime", "barrier_vt",
    "clearance_gradient", "keeping_gradient", "modified_keeping_term",
    "ExtendedBoundary", "PanelField", "direction_margins", "extend_boundaries", "extended_boundary",
    "interior_grid", "keeping_potential", "keeping_potential_gradient", "panel_gradient",
    "panel_potential",
]
