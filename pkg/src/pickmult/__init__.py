"""Numerics for multiplier algebras of the unit ball kernel.

Pick interpolation norms, disk-to-ball holomap diagnostics, a boundary
quadrature operator with its spectrum, a bounded-extension probe, and union
bound experiments, behind both a Python API and an HTTP/CLI surface.
"""

# PICKMULT_THREADS caps BLAS threading; it must land in the environment
# before numpy loads anywhere in the package, hence this runs first.
import os as _os

_threads = _os.environ.get("PICKMULT_THREADS")
if _threads and _threads.isdigit():
    for _var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        _os.environ.setdefault(_var, _threads)

__version__ = "0.1.0"

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    BallMembershipError,
    ConfigError,
    DimensionMismatchError,
    DuplicateNodeError,
    FactorizationError,
    GridResolutionError,
    InjectivityError,
    IntegrandBlowupError,
    NonHermitianError,
    NumericalError,
    PickmultError,
    PsdViolationError,
    SeparatorOverlapError,
    TransversalityError,
)
from .kernel import (
    BallPoint,
    KernelGram,
    WhitenedFactor,
    compensated_dot,
    gram,
    kernel_eval,
    min_eig_hermitian,
    whiten,
)
from .pick import (
    PickProblem,
    PickReport,
    UnionNormReport,
    multiplier_norm,
    separator_bound,
    union_norm_check,
)
from .holomap import (
    BoundaryGrid,
    Holomap,
    InjectivityReport,
    boundary_injectivity_check,
    transversality_margin,
    transversality_values,
)
from .operator_r import (
    MKernelReport,
    MonomialMap,
    RMatrix,
    SpectrumReport,
    boundary_symbol_values,
    c_m_oracle,
    m_kernel_matrix,
    r_matrix,
    semigroup_gaps,
    spectrum_report,
    szego_kernel,
    szego_projection_coeffs,
    toeplitz_symbol,
)
from .probe import (
    GOLDEN_FRACTION,
    AmbientPolynomial,
    ProbeReport,
    extension_probe,
    spiral_samples,
)

__all__ = [
    "__version__",
    "DEFAULT_TOL",
    "Tolerances",
    "PickmultError",
    "ConfigError",
    "NumericalError",
    "BallMembershipError",
    "DimensionMismatchError",
    "DuplicateNodeError",
    "SeparatorOverlapError",
    "GridResolutionError",
    "NonHermitianError",
    "FactorizationError",
    "PsdViolationError",
    "TransversalityError",
    "InjectivityError",
    "IntegrandBlowupError",
    "BallPoint",
    "KernelGram",
    "WhitenedFactor",
    "compensated_dot",
    "gram",
    "kernel_eval",
    "min_eig_hermitian",
    "whiten",
    "PickProblem",
    "PickReport",
    "UnionNormReport",
    "multiplier_norm",
    "separator_bound",
    "union_norm_check",
    "BoundaryGrid",
    "Holomap",
    "InjectivityReport",
    "boundary_injectivity_check",
    "transversality_margin",
    "transversality_values",
    "MKernelReport",
    "MonomialMap",
    "RMatrix",
    "SpectrumReport",
    "boundary_symbol_values",
    "c_m_oracle",
    "m_kernel_matrix",
    "r_matrix",
    "semigroup_gaps",
    "spectrum_report",
    "szego_kernel",
    "szego_projection_coeffs",
    "toeplitz_symbol",
    "GOLDEN_FRACTION",
    "AmbientPolynomial",
    "ProbeReport",
    "extension_probe",
    "spiral_samples",
]
