"""Vertical Finsler geometry of m-th root Minkowski metrics.

Numeric evaluation of the fundamental tensor, Cartan torsion, vertical
curvature, Ricci/scalar curvature and Einstein-like residual for metrics of
the form L(y) = A(y)^(1/m) with A a homogeneous polynomial, specialized to
the three- and four-dimensional Bogoslovsky-Goenner metrics, together with an
independent derivative-oracle subsystem that certifies every analytic formula.
"""

from .curvature import (
    ConnectionBundle,
    CurvatureBundle,
    EinsteinResidual,
    curvature_bundle,
    einstein_residual,
    einstein_tensor,
    lower_curvature,
    nonlinear_connection,
    ricci_tensor,
    scalar_curvature,
    vertical_curvature_cov,
    vertical_curvature_mixed,
)
from .errors import (
    DegenerateDomain,
    DegenerateForms,
    DimensionMismatch,
    HyperplaneSingularity,
    MrootGeomError,
    NotApplicableDimension,
    ShapeMismatch,
    SingularMetric,
    StepUnderflow,
    UnsupportedOrder,
    ZeroBase,
    ZeroKappa,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .metric import (
    Classification,
    DerivativeBundle,
    DomainStatus,
    LinearFormsMetric,
    PolynomialMetric,
    derivative_bundle,
    derivative_tensor,
    domain_status,
    evaluate,
    evaluate_batch,
    expand,
    make_bg3,
    make_bg4,
    make_product_metric,
)
from .oracle import (
    ComparisonReport,
    FdEstimate,
    OracleConfig,
    PolyPower,
    compare,
    dual_tensor,
    fd_tensor,
    fd_tensor_raw,
    golden_fixtures,
)
from .power import (
    GeometryPoint,
    cartan_torsion,
    falling_factorial,
    fundamental_tensor,
    geometry_point,
    inverse_fundamental_tensor,
    mixed_torsion,
    power_derivative,
    real_power,
    torsion_gradient,
)
from .verify import CheckReport, run_check

__version__ = "0.1.0"
