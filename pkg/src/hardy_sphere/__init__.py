"""Numerical verification of sharp Hardy-type inequalities on the unit sphere."""

from .families import (
    CounterexampleResult,
    FamilyId,
    Quantity,
    SharpnessReport,
    closed_form,
    default_schedule,
    find_counterexample,
    make_profile,
    moment_quadrature,
    sharpness_sweep,
)
from .functionals import (
    ExponentConfig,
    Functional,
    Margin,
    Regime,
    ZonalProfile,
    constant_profile,
    eval_functional,
    inequality_margin,
    profile_from_t_poly,
    sharpness_ratio,
    sharpness_target,
)
from .geometry import (
    IdentityReport,
    SphericalPoint,
    embed,
    geodesic_distance,
    grad_coordinate_analytic,
    lambda_inner,
    laplace_beltrami_fd,
    surface_gradient_fd,
    verify_identities,
)
from .quadrature import (
    NonIntegrableError,
    NumericalFailureError,
    QuadratureResult,
    QuadratureSpec,
    WeightedIntegrand,
    ZonalIntegrand,
    half_moment_closed,
    integrate_line,
    integrate_zonal,
    log_gamma,
    surface_constant,
)

__version__ = "0.1.0"
