from .models import (
    CrossSection, Location, QuadrangleChain, QuadrangleDecomposition, Region, RegionFactors,
    SectionDerivatives, TrapezoidTube,
)
from .trapezoid import (
    boundary_distance, build_trapezoid, contains, cross_section, in_slab, leg_cosines,
    revised_safety_radius, section_clearance, section_derivatives, tube_width,
)
from .chain import (
    build_chain, chain_boundary_distance, decompose_quadrangle, locate,
)

__all__ = [
    "CrossSection", "Location", "QuadrangleChain", "QuadrangleDecomposition", "Region",
    "RegionFactors", "SectionDerivatives", "TrapezoidTube",
    "boundary_distance", "build_trapezoid", "contains", "cross_section", "in_slab", "leg_cosines",
    "revised_safety_radius", "section_clearance", "section_derivatives", "tube_width",
    "build_chain", "chain_boundary_distance", "decompose_quadrangle", "locate",
]
