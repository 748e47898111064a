"""Modified Bernstein-Durrmeyer operators with Bezier weights.

Library layout:
  bernstein  - basis polynomials and their integrals
  modified   - the order-II modified basis, tail sums, Bezier weights
  exact      - exact rational polynomial engine and identity verification
  functions  - test-function corpus with total-variation oracles
  operators  - the integral operators, kernel, cumulative kernel mass
  analysis   - error measurement, modulus estimation, theorem bounds
  cli        - CSV-first command line front end with figure rendering
"""

from .analysis import (
    BoundReport,
    LipParams,
    bv_rhs,
    direct_bound_constant,
    dt_modulus,
    fit_rate,
    lip_bound,
    reports_to_csv,
    sup_error,
)
from .bernstein import (
    bernstein_all,
    bernstein_eval,
    bernstein_integral_01,
    bernstein_partial_integral,
    bernstein_rows,
    partial_integral_row,
)
from .exact import (
    RationalPolynomial,
    central_moment_poly,
    monomial_image_poly,
    second_moment_reference,
    verify_moment_identities,
)
from .functions import (
    FunctionModel,
    PiecewisePoly,
    StructureMissingError,
    builtin,
    builtin_corpus,
    combine_models,
    one_sided_derivatives,
    parse_function_spec,
    tv_derivative,
    tv_fx,
)
from .modified import (
    BERNSTEIN_REDUCTION,
    DEFAULT_CONFIG,
    ModWeightConfig,
    SignedPowerWarning,
    bezier_weights,
    constraint_residual,
    g_eval,
    h_eval,
    modified_basis_all,
    tail_range_report,
    tail_sums,
)
from .operators import (
    DurrmeyerCoefficients,
    OperatorParams,
    QuadratureError,
    apply_classical,
    apply_modified,
    apply_modified_bezier,
    durrmeyer_coefficients,
    first_absolute_moment,
    kappa,
    kernel_value,
)

__version__ = "0.1.0"

__all__ = [
    "BERNSTEIN_REDUCTION",
    "BoundReport",
    "DEFAULT_CONFIG",
    "DurrmeyerCoefficients",
    "FunctionModel",
    "LipParams",
    "ModWeightConfig",
    "OperatorParams",
    "PiecewisePoly",
    "QuadratureError",
    "RationalPolynomial",
    "SignedPowerWarning",
    "StructureMissingError",
    "apply_classical",
    "apply_modified",
    "apply_modified_bezier",
    "bernstein_all",
    "bernstein_eval",
    "bernstein_integral_01",
    "bernstein_partial_integral",
    "bernstein_rows",
    "bezier_weights",
    "builtin",
    "builtin_corpus",
    "bv_rhs",
    "central_moment_poly",
    "combine_models",
    "constraint_residual",
    "direct_bound_constant",
    "dt_modulus",
    "durrmeyer_coefficients",
    "fit_rate",
    "first_absolute_moment",
    "g_eval",
    "h_eval",
    "kappa",
    "kernel_value",
    "lip_bound",
    "modified_basis_all",
    "monomial_image_poly",
    "one_sided_derivatives",
    "parse_function_spec",
    "partial_integral_row",
    "reports_to_csv",
    "second_moment_reference",
    "sup_error",
    "tail_range_report",
    "tail_sums",
    "tv_derivative",
    "tv_fx",
    "verify_moment_identities",
]
