"""Sharp entropy-moment inequalities on homogeneous groups.

Computes the sharp constants, extremizer densities, and entropy /
moment / Fisher functionals of the anisotropic Renyi and Shannon
inequalities, the log-Sobolev inequality, and the Heisenberg-type
uncertainty principle, and verifies each inequality numerically.
"""

from .densities import (
    DensitySpec,
    density_from_dict,
    density_to_dict,
    dilate_density,
    make_gaussian,
    make_mixture,
    make_phi1,
    make_phi2,
    make_uniform_ball,
)
from .functionals import (
    InequalityReport,
    horizontal_fisher,
    is_violation,
    logsob_gap,
    moment,
    renyi_entropy,
    renyi_gap,
    shannon_entropy,
    shannon_gap,
    stam_gap,
    uncertainty_check,
)
from .group_geometry import (
    GroupSpec,
    QuasiNormSpec,
    dilate,
    ensure_sphere_measure,
    euclidean_sphere_measure,
    homogeneous_dimension,
    quasi_norm,
    sphere_measure,
)
from .quadrature import (
    BoxSampler,
    GaussianSampler,
    IntegralEstimate,
    QuadratureError,
    integrate_mc,
    integrate_radial,
)
from .sharp_constants import (
    EntropyParams,
    SharpConstantResult,
    c1,
    c2,
    log_sobolev_constant,
    optimal_dilation,
    phi1_alpha_norm,
    phi1_moment,
    phi2_alpha_norm,
    phi2_moment,
    shannon_constant,
    sharp_renyi_constant,
    uncertainty_bound,
)
from .special_functions import beta, gamma, log_gamma, stirling_gamma

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # special functions
    "log_gamma", "gamma", "beta", "stirling_gamma",
    # groups and norms
    "GroupSpec", "QuasiNormSpec", "homogeneous_dimension", "dilate",
    "quasi_norm", "sphere_measure", "ensure_sphere_measure",
    "euclidean_sphere_measure",
    # quadrature
    "IntegralEstimate", "QuadratureError", "integrate_radial",
    "integrate_mc", "BoxSampler", "GaussianSampler",
    # constants
    "EntropyParams", "SharpConstantResult", "c1", "c2",
    "phi1_alpha_norm", "phi2_alpha_norm", "phi1_moment", "phi2_moment",
    "sharp_renyi_constant", "shannon_constant", "log_sobolev_constant",
    "uncertainty_bound", "optimal_dilation",
    # densities
    "DensitySpec", "make_phi1", "make_phi2", "make_gaussian",
    "make_uniform_ball", "dilate_density", "make_mixture",
    "density_from_dict", "density_to_dict",
    # functionals
    "InequalityReport", "renyi_entropy", "shannon_entropy", "moment",
    "horizontal_fisher", "renyi_gap", "shannon_gap", "logsob_gap",
    "uncertainty_check", "stam_gap", "is_violation",
]
