"""Funk area functions of convex bodies and their balancing points.

The package evaluates the gauge (Minkowski functional) of smooth convex
bodies, the metric data it induces, and the area of the body's boundary as
the origin moves through the interior -- together with all derivatives of
that area function, its Taylor models, and the unique interior point where
it is minimized (the balancing point).
"""

__version__ = "0.1.0"

from .balance import (
    BalanceResult,
    FinslerFieldSample,
    balance_residual,
    balanced_field,
    balancing_point,
    load_field_spec,
    randers_center,
)
from .bodies import (
    ConvexBody,
    QuadraticBody,
    RadialBody2D,
    RegularityReport,
    SuperellipsoidBody,
    TranslatedBody,
    ball,
    body_from_dict,
    ellipsoid,
    load_body,
    minkowski,
    minkowski_gradient,
    minkowski_hessian,
    randers,
    translate,
    validate,
)
from .errors import (
    BodySpecError,
    ConvergenceError,
    InteriorViolationError,
    RegularityError,
)
from .funkarea import (
    AveragedMetrics,
    FunkContext,
    TaylorModel,
    area,
    area_derivative,
    area_gradient,
    area_hessian,
    associated_randers,
    averaged_metrics,
    cm_coefficient,
    conformal_factor,
    funk_gradient,
    funk_norm,
    projected_area_function,
    taylor_build,
    taylor_eval,
)
from .metric import (
    AngularSample,
    MetricSample,
    angular_metric,
    cartan_trace,
    metric_tensor,
    volume_weight,
)
from .quadrature import (
    SphereRule,
    body_integral,
    build_rule,
    indicatrix_integral,
    sphere_area,
)
from .reference import (
    OracleConfig,
    ball_funk_area_closed,
    finite_difference,
    montecarlo_body_integral,
)

__all__ = [name for name in dir() if not name.startswith("_")]
