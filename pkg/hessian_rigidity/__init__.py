"""
hessian-rigidity

Numerical verification of Liouville-type rigidity for Hessian operators
L[f] = sum_i a_i(x) S_i(Hess f): elementary symmetric functions, the
Maclaurin chain, the lower bound sigma0, condition (Q), the separable
quadratic-growth example and the touching-paraboloid probe.
"""

from ._version import __version__
from .examples import (
    QuadraticSolution,
    SeparableExample,
    estimate_growth_order,
    example_operator,
    growth_bounds_check,
    make_cosine_example,
    make_quadratic_solution,
    make_quadrature_example,
    normalize_to_MA,
    omega,
    theorem_a_residual,
)
from .exceptions import (
    ConfigurationError,
    ConvergenceError,
    DimensionMismatchError,
    FileOperationError,
    HessianRigidityError,
    InfeasibleSearchError,
    NonFiniteValueError,
    PreconditionError,
)
from .harness import RigidityHarness, affine_conclusion, rigidity_probe, run_scenario, run_scenario_async
from .linalg import (
    ScalarField,
    SymmetricMatrix,
    eigenvalues_symmetric,
    hessian_fd,
    is_psd,
    loewner_leq,
    min_eigenvalue,
)
from .models import Report, Scenario, SymmSpectrum
from .operators import (
    Coefficient,
    HessianOperator,
    ShiftedOperator,
    builtin_eq3,
    builtin_eq4,
    builtin_theoremA,
    classify_lemma_case,
    constant_operator,
    residual_field,
    residual_matrix,
    validate_condition_Q,
)
from .sampling import grid_sample, random_sample
from .sigma0 import Sigma0Problem, contradiction_eps, min_Sk_oracle, solve_sigma0, verify_lower_bound
from .symmfn import (
    check_maclaurin_chain,
    elementary_symmetric,
    majorization_bound,
    maclaurin_mean,
    symm_of_matrix,
)

__author__ = "hessian-rigidity developers"

__all__ = [
    "__version__",
    "SymmetricMatrix",
    "ScalarField",
    "eigenvalues_symmetric",
    "min_eigenvalue",
    "is_psd",
    "loewner_leq",
    "hessian_fd",
    "SymmSpectrum",
    "symm_of_matrix",
    "elementary_symmetric",
    "maclaurin_mean",
    "check_maclaurin_chain",
    "majorization_bound",
    "Coefficient",
    "HessianOperator",
    "ShiftedOperator",
    "residual_matrix",
    "residual_field",
    "validate_condition_Q",
    "classify_lemma_case",
    "constant_operator",
    "builtin_eq3",
    "builtin_eq4",
    "builtin_theoremA",
    "Sigma0Problem",
    "solve_sigma0",
    "contradiction_eps",
    "min_Sk_oracle",
    "verify_lower_bound",
    "SeparableExample",
    "QuadraticSolution",
    "make_cosine_example",
    "make_quadrature_example",
    "omega",
    "example_operator",
    "growth_bounds_check",
    "estimate_growth_order",
    "make_quadratic_solution",
    "normalize_to_MA",
    "theorem_a_residual",
    "grid_sample",
    "random_sample",
    "Scenario",
    "Report",
    "RigidityHarness",
    "run_scenario",
    "run_scenario_async",
    "rigidity_probe",
    "affine_conclusion",
    "HessianRigidityError",
    "DimensionMismatchError",
    "NonFiniteValueError",
    "ConvergenceError",
    "PreconditionError",
    "InfeasibleSearchError",
    "ConfigurationError",
    "FileOperationError",
]
