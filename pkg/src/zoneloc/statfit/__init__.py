"""Distribution fitting with K-S model selection, producing the observation model."""

from .distributions import Family, cdf, estimate_params, eval_distribution, pdf
from .ks import ks_critical_value, ks_statistic
from .model import (
    MAX_ZONES,
    FitConfig,
    FittedDistribution,
    ObservationModel,
    fit_observation_model,
    select_distribution,
)

__all__ = [
    "MAX_ZONES",
    "Family",
    "FitConfig",
    "FittedDistribution",
    "ObservationModel",
    "cdf",
    "estimate_params",
    "eval_distribution",
    "fit_observation_model",
    "ks_critical_value",
    "ks_statistic",
    "pdf",
    "select_distribution",
]
