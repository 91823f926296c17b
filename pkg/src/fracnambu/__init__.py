"""Fractal calculus on middle-epsilon Cantor sets and Nambu-bracket flows.

The package has four layers:

* ``cantor``: set construction, coarse-grained alpha-measure, dimension
  estimation, the integral staircase S(x), and derivatives/integrals taken
  against S instead of x.
* ``brackets``: order-n Nambu brackets as Jacobian determinants, with the
  axiom checks (skew symmetry, Leibniz, the nested-bracket identity),
  Liouville divergence, the induced bivector, and canonical-transform
  Jacobians.
* ``systems`` / ``dynamics``: built-in Hamiltonian tuples and time-changed
  integration (solve dy/ds = V(y) with RK4, read the trajectory off at
  s = S(t)).
* ``cli``: deterministic CSV/JSON/PNG artifacts driven by a JSON config.
"""

from .brackets import (
    NambuSystem,
    ScalarField,
    canonical_jacobian,
    check_bivector_identity,
    coordinate_field,
    gradient,
    induced_bivector,
    linear_combination,
    liouville_divergence,
    nambu_bracket,
    nambu_vector_field,
    product_field,
    verify_bracket_axiom,
)
from .cantor import (
    CantorSpec,
    FractalApprox,
    FractalIntegral,
    IllConditionedError,
    NonConvergenceError,
    Staircase,
    build_cantor,
    coarse_measure,
    estimate_dimension,
    fractal_derivative,
    fractal_integral,
    indicator,
    staircase_eval,
    staircase_inverse,
)
from .dynamics import (
    ConservationReport,
    IntegrationBlowupError,
    SPath,
    TimeModel,
    Trajectory,
    conservation_report,
    integrate_s_time,
    subordinate,
    trajectory_to_csv,
)
from .systems import (
    build_system,
    euler_top,
    harmonic_oscillator_4,
    nahm,
    random_polynomial_field,
)

__version__ = "0.1.0"

__all__ = [
    "CantorSpec",
    "ConservationReport",
    "FractalApprox",
    "FractalIntegral",
    "IllConditionedError",
    "IntegrationBlowupError",
    "NambuSystem",
    "NonConvergenceError",
    "SPath",
    "ScalarField",
    "Staircase",
    "TimeModel",
    "Trajectory",
    "build_cantor",
    "build_system",
    "canonical_jacobian",
    "check_bivector_identity",
    "coarse_measure",
    "conservation_report",
    "coordinate_field",
    "estimate_dimension",
    "euler_top",
    "fractal_derivative",
    "fractal_integral",
    "gradient",
    "harmonic_oscillator_4",
    "indicator",
    "induced_bivector",
    "integrate_s_time",
    "linear_combination",
    "liouville_divergence",
    "nahm",
    "nambu_bracket",
    "nambu_vector_field",
    "product_field",
    "random_polynomial_field",
    "staircase_eval",
    "staircase_inverse",
    "subordinate",
    "trajectory_to_csv",
    "verify_bracket_axiom",
]
