"""Explicit boundary-independence bounds for heat kernels.

For any non-negative self-adjoint realization of the Laplacian on a domain,
the heat kernel stays exponentially close to the whole-space Gaussian for
short times, with a rate set by the distance to the boundary and constants
independent of the boundary condition.  This package evaluates those bounds
in closed form and verifies them against exactly solvable kernels (method
of images, Robin half-line, disk/ball center diagonals).
"""

__version__ = "0.1.0"

from .backend import backend_name
from .exact_kernels import (
    BC,
    FullLine,
    HalfLine,
    Interval,
    KernelSample,
    SeparableDomain,
    disk_center_diag_neumann,
    halfline_kernel,
    interval_kernel,
    product_kernel,
)
from .heat_bounds import (
    BoundQuery,
    BoundResult,
    NeumannTraceParts,
    TimeWindowError,
    boundary_error_bound,
    canonical_error_bound,
    classical_dirichlet_bound,
    dirichlet_error_bound,
    diagonal_power_form,
    free_kernel,
    neumann_error_bound,
)
from .jm_bound import (
    EpsilonSchedule,
    JmQuery,
    gaussian_tail_bound,
    jm_closed_form_bound,
    jm_numeric_oracle,
    z_function,
)
from .polynomials import (
    CutoffSpec,
    Polynomial,
    gaussian_derivative_coeffs,
    hermite_polynomial,
    interpolating_cutoff,
    sup_derivative_norm,
)
from .ball_spectrum import (
    SpectrumTable,
    build_spectrum,
    center_trace_comparison,
    neumann_trace,
    trace_weighted_integral,
)
from .spectral_constants import (
    ConstantSet,
    DimensionParams,
    compute_constants,
    default_smoothing_order,
    free_green_diag,
    green_diag_bound,
    spectral_diag_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
