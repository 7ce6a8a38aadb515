"""Sharp L^p norm of the Fock-space projection: closed forms, oracles, optimizer.

The package computes the exact operator norm of the orthogonal projection
onto holomorphic functions in Gaussian-weighted L^p, certifies it by
constrained optimization over complex symmetric matrices with positive
definite real part, and cross-checks every closed form against brute-force
quadrature.  A duality module verifies the kernel/functional norm mismatch
and the dual-norm sandwich.

Hot kernels run through numba when available; set FOCKPROJ_NO_NUMBA=1 to
force the pure-numpy fallback (same results, same API).
"""

__version__ = "0.1.0"

from .duality import (
    DualityReport,
    HoloPolynomial,
    MixedPolynomial,
    bargmann_project,
    duality_sandwich_check,
    eval_functional_norm,
    gamma_lp_norm,
    gamma_pairing,
    holo_pairing,
    monomial_inner_product,
    nonduality_ratio,
    reproducing_kernel_norm,
)
from .errors import (
    AdmissibilityError,
    ConvergenceError,
    CounterexampleError,
    DegreeError,
    DimensionError,
    DomainError,
    FockprojError,
    SingularMatrixError,
)
from .gaussians import (
    GaussianFunction,
    continuous_sqrt_det,
    gaussian_integral,
    gaussian_lp_norm,
)
from .matrices import (
    AdmissibleMatrix,
    ComplexSymMatrix,
    PlaneRotation,
    SymplecticJ,
    check_admissible,
    complex_sym_det,
    complex_sym_inverse,
    conjugate_by_rotation,
    diagonalizing_rotation,
    omega_map,
    symplectic_matrix,
)
from .objective import (
    ObjectiveEvaluation,
    coords_from_matrix,
    matrix_from_coords,
    objective_coords,
    objective_gradient,
    objective_matrix,
    tau_three_forms,
)
from .operator import (
    KernelBlocks,
    OperatorConfig,
    abs_kernel_norm_ratio,
    apply_projection_to_gaussian,
    gaussian_norm_ratio,
    kernel_blocks,
    projection_kernel,
    reproducing_kernel,
    weight_multiplier,
)
from .optimize import (
    BoundConstants,
    CriticalPoint,
    GlobalMaxReport,
    NormReport,
    bound_constants,
    compute_norm_report,
    critical_coords,
    critical_objective_value,
    find_critical_point,
    multistart_critical_points,
    sharp_norm,
    sharp_norm_factor,
    tensorized_norm,
    verify_global_max,
)
from .quadrature import (
    QuadratureResult,
    QuadratureSpec,
    expquad_grid,
    expquad_separable,
    gauss_hermite_rule,
    oscillation_grid,
    quadrature_integrate,
)
from .suites import CheckResult, run_suite

__all__ = [
    "AdmissibilityError",
    "AdmissibleMatrix",
    "BoundConstants",
    "CheckResult",
    "ComplexSymMatrix",
    "ConvergenceError",
    "CounterexampleError",
    "CriticalPoint",
    "DegreeError",
    "DimensionError",
    "DomainError",
    "DualityReport",
    "FockprojError",
    "GaussianFunction",
    "GlobalMaxReport",
    "HoloPolynomial",
    "KernelBlocks",
    "MixedPolynomial",
    "NormReport",
    "ObjectiveEvaluation",
    "OperatorConfig",
    "PlaneRotation",
    "QuadratureResult",
    "QuadratureSpec",
    "SingularMatrixError",
    "SymplecticJ",
    "abs_kernel_norm_ratio",
    "apply_projection_to_gaussian",
    "bargmann_project",
    "bound_constants",
    "check_admissible",
    "complex_sym_det",
    "complex_sym_inverse",
    "compute_norm_report",
    "conjugate_by_rotation",
    "continuous_sqrt_det",
    "coords_from_matrix",
    "critical_coords",
    "critical_objective_value",
    "diagonalizing_rotation",
    "duality_sandwich_check",
    "eval_functional_norm",
    "expquad_grid",
    "expquad_separable",
    "find_critical_point",
    "gamma_lp_norm",
    "gamma_pairing",
    "gauss_hermite_rule",
    "gaussian_integral",
    "gaussian_lp_norm",
    "gaussian_norm_ratio",
    "holo_pairing",
    "kernel_blocks",
    "matrix_from_coords",
    "monomial_inner_product",
    "multistart_critical_points",
    "nonduality_ratio",
    "objective_coords",
    "objective_gradient",
    "objective_matrix",
    "omega_map",
    "oscillation_grid",
    "projection_kernel",
    "quadrature_integrate",
    "reproducing_kernel",
    "reproducing_kernel_norm",
    "run_suite",
    "sharp_norm",
    "sharp_norm_factor",
    "symplectic_matrix",
    "tau_three_forms",
    "tensorized_norm",
    "verify_global_max",
    "weight_multiplier",
]
