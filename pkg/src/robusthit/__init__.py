"""Exact-arithmetic workbench for robust hitting sets of algebraic circuits.

The package provides, end to end: a small circuit IR with exact rational
and Gaussian-rational scalars, polynomial expansion and L2 norms under the
uniform box measure (with an orthogonal-basis cross-check), discretized
grids and rounding bounds, anti-concentration experiments, universal
circuit skeletons, existential-real-arithmetic encodings driven through an
external solver, a toy-scale certificate search with independent
verification, and extraction of low-degree polynomials vanishing on a
hitting set.

Everything that decides a pass/fail question is computed in exact rational
arithmetic; floating point appears only in clearly-labeled statistical
tolerances.
"""

from .circuits import Circuit, CircuitBuilder, Gate, check_homogeneous, parse_circuit
from .errors import (
    BackendError,
    BudgetError,
    CapacityError,
    DegenerateError,
    DimensionError,
    ExhaustedError,
    InfeasibleError,
    RangeError,
    ShapeError,
    WorkbenchError,
)
from .grids import GridSpec, GridVariant, derive_seed, round_to_grid
from .hardpoly import choose_degree, extract_hard_poly
from .norms import (
    check_norm_inequalities,
    complex_l2_pair,
    l2_norm_sq_direct,
    l2_norm_sq_legendre,
)
from .params import ParamBundle, compute_params
from .poly import DensePoly, expand_circuit, realify_poly
from .robust import (
    HittingSet,
    check_robust_net_condition,
    interpolation_constants,
    realify,
    sample_candidate,
    tensor_limit_demo,
    verify_robust,
)
from .scalars import GaussianRational, Scalar, parse_scalar
from .search import SearchConfig, SearchCertificate, run_search, verify_certificate
from .universal import UniversalCircuit, build_universal, embed_normal_form, fix_auxiliary

try:
    from importlib.metadata import PackageNotFoundError, version as _dist_version

    try:
        __version__ = _dist_version("artifact")
    except PackageNotFoundError:   # pragma: no cover
        __version__ = "0.0.0+local"
except ImportError:   # pragma: no cover
    __version__ = "0.0.0+local"

__all__ = [
    "BackendError",
    "BudgetError",
    "CapacityError",
    "Circuit",
    "CircuitBuilder",
    "DegenerateError",
    "DensePoly",
    "DimensionError",
    "ExhaustedError",
    "Gate",
    "GaussianRational",
    "GridSpec",
    "GridVariant",
    "HittingSet",
    "InfeasibleError",
    "ParamBundle",
    "RangeError",
    "Scalar",
    "SearchCertificate",
    "SearchConfig",
    "ShapeError",
    "UniversalCircuit",
    "WorkbenchError",
    "build_universal",
    "check_homogeneous",
    "check_norm_inequalities",
    "check_robust_net_condition",
    "choose_degree",
    "complex_l2_pair",
    "compute_params",
    "derive_seed",
    "embed_normal_form",
    "expand_circuit",
    "extract_hard_poly",
    "fix_auxiliary",
    "interpolation_constants",
    "l2_norm_sq_direct",
    "l2_norm_sq_legendre",
    "parse_circuit",
    "parse_scalar",
    "realify",
    "realify_poly",
    "round_to_grid",
    "run_search",
    "sample_candidate",
    "tensor_limit_demo",
    "verify_certificate",
    "verify_robust",
]
