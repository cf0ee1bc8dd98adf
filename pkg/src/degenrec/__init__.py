"""Analysis of degenerated third-order linear recurrences."""

from .binet import (
    BinetCoefficients,
    binet_eval,
    coefficient_matrix,
    invert_coefficient_matrix,
    solve_coefficients,
)
from .convergence import ConvergenceSolutions, LimitKind, converged_limit, u2_solutions
from .limits import (
    LimitReport,
    Regime,
    VanishingSequenceError,
    analytic_limits,
    empirical_gamma_squared,
    empirical_parity_limits,
    empirical_two_step_limit,
    gamma_of,
)
from .numerics import (
    Backend,
    MixedBackendError,
    ScalarParseError,
    Tolerance,
    approx_eq,
    parse_scalar,
    render,
)
from .recurrence import (
    Classification,
    DegenerateRoots,
    FitError,
    FitMismatchError,
    InvalidRootsError,
    RecurrenceSpec,
    SingularFitError,
    Tag,
    classify,
    fit_coefficients,
    iterate_terms,
    make_degenerate_spec,
)

__version__ = "0.1.0"
