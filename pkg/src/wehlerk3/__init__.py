"""Involution dynamics of Wehler K3 surfaces over prime finite fields.

The package computes the two fiberwise involutions of a surface cut out by a
(1,1) and a (2,2) form in P^2 x P^2, extends them across degenerate fibers by
blowing up the base point, decomposes the induced map phi = sigma_y o sigma_x
into cycles over F_p, and compares the scaled cycle-length distribution with
the limit law R(x) = 1 - e^(-x)(1 + x).
"""

from .blowup import (
    BlowupChart,
    BoundaryPoint,
    build_chart,
    exceptional_points,
    ramification_prime,
    resolve_s,
    sigma_extended,
)
from .dynamics import (
    CycleCensus,
    PhasePoint,
    PhaseSpace,
    asymmetric_pairing,
    build_phase_space,
    classify_cycle,
    cycle_decomposition,
    lift_pair,
    orbit,
)
from .field import QQ, FieldElement, PrimeField, field_inv, field_sqrt
from .geometry import ProjectivePoint1, ProjectivePoint2, point1, point2
from .involution import fiber_partner_oracle, fixed_points, phi, psi, sigma
from .poly import SparsePoly, poly_divide_exact, poly_substitute, vanishing_order
from .stats import (
    ExperimentConfig,
    ExperimentReport,
    area_error,
    empirical_curve,
    limit_R,
    period_histogram,
    run_experiment,
    sanity_windows,
)
from .surface import (
    CoefficientPolys,
    DegenerateFiberInfo,
    GHSystem,
    RamificationSextic,
    SmoothnessReport,
    WehlerSurface,
    coefficient_polys,
    degenerate_fibers,
    enumerate_points,
    fiber_quadratic,
    gh_system,
    is_smooth_rational,
    parse_surface,
    point_count,
    ramification_sextic,
    random_surface,
    serialize_surface,
)

__all__ = [
    "QQ",
    "FieldElement",
    "PrimeField",
    "field_inv",
    "field_sqrt",
    "ProjectivePoint1",
    "ProjectivePoint2",
    "point1",
    "point2",
    "SparsePoly",
    "poly_substitute",
    "poly_divide_exact",
    "vanishing_order",
    "CoefficientPolys",
    "DegenerateFiberInfo",
    "GHSystem",
    "RamificationSextic",
    "SmoothnessReport",
    "WehlerSurface",
    "coefficient_polys",
    "degenerate_fibers",
    "enumerate_points",
    "fiber_quadratic",
    "gh_system",
    "is_smooth_rational",
    "parse_surface",
    "point_count",
    "ramification_sextic",
    "random_surface",
    "serialize_surface",
    "sigma",
    "phi",
    "psi",
    "fixed_points",
    "fiber_partner_oracle",
    "BlowupChart",
    "BoundaryPoint",
    "build_chart",
    "exceptional_points",
    "ramification_prime",
    "resolve_s",
    "sigma_extended",
    "PhasePoint",
    "PhaseSpace",
    "CycleCensus",
    "build_phase_space",
    "cycle_decomposition",
    "classify_cycle",
    "asymmetric_pairing",
    "orbit",
    "lift_pair",
    "ExperimentConfig",
    "ExperimentReport",
    "run_experiment",
    "empirical_curve",
    "area_error",
    "limit_R",
    "period_histogram",
    "sanity_windows",
]

__version__ = "0.1.0"
