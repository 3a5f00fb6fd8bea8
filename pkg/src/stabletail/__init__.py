"""stabletail: isotropic alpha-stable transition densities, their
fractional Laplacian and gradient, tail asymptotics, and empirical
certification of the bilateral estimates."""

from .asymptotics import (
    AsymptoticConstant,
    Branch,
    gradient_constant,
    gradient_tail,
    gradient_tail_constant,
    gradient_tail_constant_odd,
    hankel_limit,
    k_bessel_moment,
    laplacian_constant,
    laplacian_tail,
    laplacian_tail_constant,
    laplacian_tail_constant_even,
)
from .bounds import (
    CertReport,
    certify_classical_bounds,
    certify_density_bounds,
    certify_sup_bound,
    find_threshold_radius,
    write_report_csv,
)
from .errors import (
    DomainError,
    NoConvergenceError,
    ParityError,
    ResolutionError,
    StableTailError,
    UnsupportedDimensionError,
    UnsupportedOrderError,
)
from .hankel import (
    HankelIntegrand,
    QuadResult,
    Strategy,
    hankel_integral,
    hankel_integral_contour,
    hankel_integral_direct,
    recursion_residual,
)
from .kernels import (
    KappaOrder,
    ProfileResult,
    StableParams,
    density,
    frac_gradient_density,
    frac_laplacian_density,
    gradient_identity_residual,
    gradient_profile,
    gradient_vector,
    laplacian_profile,
    laplacian_profile_detailed,
)
from .oracle import (
    OracleResult,
    cauchy_density,
    cauchy_derivative,
    tensor_grid_kernel,
    tensor_grid_kernel_batch,
)
from .special import BesselOrder, bessel_j, bessel_j_zeros, bessel_k, gamma

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
