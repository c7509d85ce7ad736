"""Two-weight Hardy inequalities with ``p = 1`` on spaces with a polar decomposition."""

__version__ = "0.1.0"

from .core import (
    Direction,
    HardyProblem,
    RadialTestFunction,
    SupSearchConfig,
    ball_mass_V,
    compute_A,
    compute_A_p,
    hardy_lhs,
    hardy_rhs,
    minkowski_bound,
    tail_mass_U,
    verify_inequality,
)
from .corollaries import (
    PowerWeightParams,
    classical_halfline_constant,
    classify_cartan_hadamard,
    classify_group,
    classify_hyperbolic,
)
from .errors import (
    ConfigError,
    DivergenceError,
    DomainError,
    HardyError,
    InconclusiveError,
    InconsistencyError,
    ResolutionError,
)
from .geometry import PolarGeometry, QuasiNorm, QuasiNormKind, ball_volume, radial_density, sphere_measure_mc
from .quadrature import QuadConfig, integrate_interval, integrate_tail
from .sharpness import lower_bound_certificate, sharpness_study, witness_function
from .values import ExtendedValue, State
from .weights import Monotonicity, RadialWeight, sup_inv_on_ball, sup_inv_on_exterior

__all__ = [name for name in dir() if not name.startswith("_")]
