"""Weighted Fermat-Torricelli trees on constant-curvature planes and
surfaces of revolution, with the inverse and residual-weight problems."""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    DegenerateError,
    DomainError,
    GeometryError,
    NoGeodesicFoundError,
    NonUniqueGeodesicError,
    PoleSingularityError,
    UndefinedDirectionError,
)
from .inverse import (
    MassFlow,
    SubconsciousWeights,
    consistent_subconscious,
    evolution_phase2,
    inverse_weights,
    mass_flow_reduce,
    phase1_subconscious,
    subconscious_weights,
)
from .kplane import (
    Excess,
    KPlane,
    aleksandrov_excess,
    angle_at,
    distance,
    exp_map,
    log_direction,
    unified_cosine_side,
)
from .revolution import (
    GeodesicPath,
    ProfileCurve,
    RevolutionSurface,
    cylinder_profile,
    gaussian_curvature,
    geodesic_bvp,
    geodesic_ivp,
    local_curvature_triplet,
    profile_from_name,
    sphere_profile,
    tangent_at_start,
    torus_profile,
)
from .solver import (
    FTTree,
    SolverOptions,
    WeightedTriangle,
    WeightTriple,
    angles_from_weights,
    balance_equations,
    first_variation_check,
    floating_case,
    solve_ft,
    verify_balance,
)
