"""oscint: equispaced quadrature for oscillatory integrals.

Bounded-interval lattice rules with a zero-algorithm safeguard, a
partition-of-unity composite rule for densities on the real line, explicit
worst-case bound evaluators, and an oracle/harness that audits the bounds
and measures convergence rates empirically.
"""

from .backend import active_backend, set_backend
from .density import (
    CS,
    HS,
    CellBudget,
    CellPlan,
    DensityModel,
    allocation_weights,
    cell_norm_cs,
    cell_norm_hs,
    cramer_bound,
    gaussian_density,
)
from .errors import AccuracyError, ConfigurationError, SaturationError
from .harness import (
    ConvergenceReport,
    StudySpec,
    audit_bounds,
    convergence_study,
    empirical_complexity,
    fit_rate,
)
from .jet import Jet, derivatives, jet_exp, jet_mul, jet_recip, jet_variable
from .oracle import (
    TestFunction,
    norm_cs_oracle,
    norm_hs_oracle,
    poisson_residual,
    reference_integral,
    reference_integral_line,
    testfn,
)
from .partition import bump, bump_jet, partition_residual, smooth_step
from .quad_compact import (
    Interval,
    QuadratureRule,
    apply_rule,
    build_rule,
    initial_error_bound,
    kbar,
    nu_s,
    safeguarded_rule,
    worstcase_bound,
)
from .quad_line import LineProblem, evaluation_count, integrate_line, line_error_bound

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "CellBudget",
    "CellPlan",
    "ConfigurationError",
    "ConvergenceReport",
    "CS",
    "DensityModel",
    "HS",
    "Interval",
    "Jet",
    "LineProblem",
    "QuadratureRule",
    "SaturationError",
    "StudySpec",
    "TestFunction",
    "active_backend",
    "allocation_weights",
    "apply_rule",
    "audit_bounds",
    "build_rule",
    "bump",
    "bump_jet",
    "cell_norm_cs",
    "cell_norm_hs",
    "convergence_study",
    "cramer_bound",
    "derivatives",
    "empirical_complexity",
    "evaluation_count",
    "fit_rate",
    "gaussian_density",
    "initial_error_bound",
    "integrate_line",
    "jet_exp",
    "jet_mul",
    "jet_recip",
    "jet_variable",
    "kbar",
    "line_error_bound",
    "norm_cs_oracle",
    "norm_hs_oracle",
    "nu_s",
    "partition_residual",
    "poisson_residual",
    "reference_integral",
    "reference_integral_line",
    "safeguarded_rule",
    "set_backend",
    "smooth_step",
    "testfn",
    "worstcase_bound",
]
