"""Exact integer-valued central limit approximation with total-variation bounds."""

from .bounds import (
    BoundReport,
    bound_report,
    cor43_bound,
    dplus_exact,
    dplus_prop44,
    wasserstein_route_bound,
    lattice_span,
    thm41_bound,
    thm42_bound,
)
from .dist_core import (
    IntDist,
    SupportCapExceeded,
    bernoulli,
    cdf,
    convolve,
    convolve_all,
    from_pmf,
    mean,
    mixture,
    point_mass,
    self_convolve,
    shift,
    tail_slack,
    tv_distance,
    uniform,
    variance,
    wasserstein1,
)
from .psi_family import (
    PsiParams,
    characterization_residual,
    discrete_normal_pmf,
    metadata,
    psi_moments,
    psi_pmf,
    psi_zero_bias,
    translated_poisson_pmf,
)
from .stein_bdp import (
    BDPSimConfig,
    StateCapExceeded,
    TargetSet,
    bdp_simulate,
    check_balance,
    mean_down_time,
    mean_up_time,
    occupation_time,
    stein_factor_bound,
    stein_factor_check,
    stein_solution,
)
from .zero_bias import (
    ComponentSet,
    optimal_coupling,
    size_bias,
    sum_zero_bias,
    verify_characterization,
    zero_bias,
)

__version__ = "0.1.0"

__all__ = [
    "BDPSimConfig",
    "BoundReport",
    "ComponentSet",
    "IntDist",
    "PsiParams",
    "StateCapExceeded",
    "SupportCapExceeded",
    "TargetSet",
    "bdp_simulate",
    "bernoulli",
    "bound_report",
    "cdf",
    "characterization_residual",
    "check_balance",
    "convolve",
    "convolve_all",
    "cor43_bound",
    "discrete_normal_pmf",
    "dplus_exact",
    "dplus_prop44",
    "from_pmf",
    "lattice_span",
    "mean",
    "mean_down_time",
    "mean_up_time",
    "metadata",
    "mixture",
    "occupation_time",
    "optimal_coupling",
    "point_mass",
    "psi_moments",
    "psi_pmf",
    "psi_zero_bias",
    "self_convolve",
    "shift",
    "size_bias",
    "stein_factor_bound",
    "stein_factor_check",
    "stein_solution",
    "sum_zero_bias",
    "tail_slack",
    "thm41_bound",
    "thm42_bound",
    "translated_poisson_pmf",
    "tv_distance",
    "uniform",
    "variance",
    "verify_characterization",
    "wasserstein1",
    "wasserstein_route_bound",
    "zero_bias",
]
