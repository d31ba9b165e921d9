"""Highest-posterior-density credible sets for banded spike-and-slab priors.

One observation X = theta + noise, noise from a symmetric unimodal law; the
prior mixes an atom at zero with an improper uniform slab on {|theta| > lam}.
The package computes the credible sets in closed form, evaluates their exact
frequentist coverage (with a Monte Carlo cross-check), verifies the coverage
bounds including the 1 - 3*alpha/2 dip, and converts credible sets into
post-selection confidence sets.
"""

__version__ = "0.1.0"

from .distributions import (
    Distribution,
    Gaussian,
    Laplace,
    StudentT3,
    SubExponential,
    TailDecayReport,
    check_tail_decay,
    interval_mass,
    make_distribution,
)
from .posterior import (
    PriorConfig,
    atom_mass,
    atom_threshold,
    gap_complement,
    gap_mass,
    posterior_normalizer,
    posterior_probability,
)
from .hpd import (
    CredibleSet,
    InverseSet,
    InversionError,
    Regime,
    classify_regime,
    endpoint_values,
    hpd_length,
    hpd_radii,
    hpd_set,
    invert_lower,
    invert_upper,
    lower_endpoint,
    lower_values,
    onesided_lower_endpoint,
    onesided_radii,
    onesided_upper_endpoint,
    regime_codes,
    smallest_lower_inverse,
    upper_endpoint,
    upper_endpoint_alt,
    upper_values,
)
from .scanning import ScanSettings
from .coverage import (
    BoundReport,
    CoveragePoint,
    CoverageReport,
    DipResult,
    check_coverage_bounds,
    coverage_curve,
    coverage_exact,
    coverage_mc,
    dip_search,
    dip_scaling_exponent,
    hpd_contains,
    onesided_coverage_exact,
    predicted_dip_level,
)
from .postselect import (
    PostSelectionSet,
    conditional_coverage_mc,
    credible_set_contains,
    post_selection_set,
)

__all__ = [
    "__version__",
    "Distribution",
    "Gaussian",
    "Laplace",
    "StudentT3",
    "SubExponential",
    "TailDecayReport",
    "check_tail_decay",
    "interval_mass",
    "make_distribution",
    "PriorConfig",
    "atom_mass",
    "atom_threshold",
    "gap_complement",
    "gap_mass",
    "posterior_normalizer",
    "posterior_probability",
    "CredibleSet",
    "InverseSet",
    "InversionError",
    "Regime",
    "classify_regime",
    "endpoint_values",
    "hpd_length",
    "hpd_radii",
    "hpd_set",
    "invert_lower",
    "invert_upper",
    "lower_endpoint",
    "lower_values",
    "onesided_lower_endpoint",
    "onesided_radii",
    "onesided_upper_endpoint",
    "regime_codes",
    "smallest_lower_inverse",
    "upper_endpoint",
    "upper_endpoint_alt",
    "upper_values",
    "ScanSettings",
    "BoundReport",
    "CoveragePoint",
    "CoverageReport",
    "DipResult",
    "check_coverage_bounds",
    "coverage_curve",
    "coverage_exact",
    "coverage_mc",
    "dip_search",
    "dip_scaling_exponent",
    "hpd_contains",
    "onesided_coverage_exact",
    "predicted_dip_level",
    "PostSelectionSet",
    "conditional_coverage_mc",
    "credible_set_contains",
    "post_selection_set",
]
