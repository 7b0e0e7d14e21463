"""Heavy-tailed risk aggregation under copula dependence."""

from ._core import (
    ConvolvedDistribution,
    Copula,
    CopulaFamily,
    DomainError,
    EstimationFailure,
    NumericalFailure,
    SpecError,
    StableParams,
    affine_transform_params,
    analytic_var,
    cdf,
    empirical_var,
    iid_sum_params,
    pdf,
    preset_names,
    quantile,
    run,
    sample,
    sf,
    sr_analytic_independent,
    super_additivity_ratio,
)

__all__ = [
    "ConvolvedDistribution",
    "Copula",
    "CopulaFamily",
    "DomainError",
    "EstimationFailure",
    "NumericalFailure",
    "SpecError",
    "StableParams",
    "affine_transform_params",
    "analytic_var",
    "cdf",
    "empirical_var",
    "iid_sum_params",
    "pdf",
    "preset_names",
    "quantile",
    "run",
    "sample",
    "sf",
    "sr_analytic_independent",
    "super_additivity_ratio",
]
__version__ = "0.1.0"
