"""Interior-point checks, multiplier recovery, and no-interior
certificates for box-plus-linear constraint systems on weighted grids.

The public surface is re-exported here; see the README for a tour.
"""

from .errors import (
    CertificateNotFoundError,
    ConstructionFailedError,
    DimensionMismatchError,
    EmptyPolyhedronError,
    FileFormatError,
    InconsistentEqualitiesError,
    InfeasiblePointError,
    InvalidGradientError,
    NumericalFailureError,
    PreconditionError,
    SlaterkitError,
    VoidProblemError,
)
from .model import (
    DEFAULT_TOL,
    FeasibilityReport,
    MeasureSpace,
    Problem,
    QuadraticConstraint,
    RegionPartition,
    Violation,
    check_feasible,
    conjugate_exponent,
    lp_norm,
    pairing,
    regions,
)
from .lp import (
    EQ,
    GE,
    LE,
    FarkasCertificate,
    LinearProgram,
    LpOutcome,
    LpStatus,
    feasibility,
    solve,
)
from .cones import (
    Decomposition,
    SumMembership,
    closure_sequence,
    decompose_into_normal_sum,
    normal_K_contains,
    radial_K_witness,
    sum_NK_NP_contains,
    tangent_K_contains,
    tangent_P_contains,
)
from .preprocess import (
    EqReduction,
    MfcqSystem,
    build_mfcq_system,
    detect_implicit_equalities,
    reduce_equalities,
)
from .slater import (
    SlaterReport,
    combine_slater,
    density_construction,
    find_linearized_slater,
    find_slater,
    interior_margin,
)
from .kkt import (
    KktOutcome,
    Multipliers,
    StationarityReport,
    recover_multipliers_linear,
    recover_multipliers_nonlinear,
    split_zeta,
    validate_gradients,
    verify_stationarity,
)
from .certificates import (
    MODELS,
    NoSlaterCertificate,
    RefinementReport,
    build_bad_functional,
    build_no_slater_certificate,
    constant_control_model,
    log_counterexample_model,
    refinement_study,
)
from .fileio import canonical_json, load_point, load_problem, problem_to_dict

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "CertificateNotFoundError",
    "ConstructionFailedError",
    "Decomposition",
    "DimensionMismatchError",
    "EmptyPolyhedronError",
    "EQ",
    "EqReduction",
    "FarkasCertificate",
    "FeasibilityReport",
    "FileFormatError",
    "GE",
    "InconsistentEqualitiesError",
    "InfeasiblePointError",
    "InvalidGradientError",
    "KktOutcome",
    "LE",
    "LinearProgram",
    "LpOutcome",
    "LpStatus",
    "MeasureSpace",
    "MfcqSystem",
    "MODELS",
    "Multipliers",
    "NoSlaterCertificate",
    "NumericalFailureError",
    "PreconditionError",
    "Problem",
    "QuadraticConstraint",
    "RefinementReport",
    "RegionPartition",
    "SlaterkitError",
    "SlaterReport",
    "StationarityReport",
    "SumMembership",
    "Violation",
    "VoidProblemError",
    "build_bad_functional",
    "build_mfcq_system",
    "build_no_slater_certificate",
    "canonical_json",
    "check_feasible",
    "closure_sequence",
    "combine_slater",
    "conjugate_exponent",
    "constant_control_model",
    "decompose_into_normal_sum",
    "density_construction",
    "detect_implicit_equalities",
    "feasibility",
    "find_linearized_slater",
    "find_slater",
    "interior_margin",
    "load_point",
    "load_problem",
    "log_counterexample_model",
    "lp_norm",
    "normal_K_contains",
    "pairing",
    "problem_to_dict",
    "radial_K_witness",
    "recover_multipliers_linear",
    "recover_multipliers_nonlinear",
    "reduce_equalities",
    "refinement_study",
    "regions",
    "solve",
    "split_zeta",
    "sum_NK_NP_contains",
    "tangent_K_contains",
    "tangent_P_contains",
    "validate_gradients",
    "verify_stationarity",
]
