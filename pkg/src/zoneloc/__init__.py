"""Zone-level indoor localization from WiFi RSS.

Offline, RSS samples of every access point are pooled over every non-empty
set of zones and fitted with a distribution family chosen by the
Kolmogorov-Smirnov test. Online, each AP's reading becomes a mass function
over zone sets, the APs are fused with Dempster's rule, and the pignistic
transformation yields a confidence per zone.
"""

from .belief import (
    ConfidenceMap,
    MassFunction,
    build_bba,
    conjunctive_combine,
    dempster_normalize,
    localize,
    localize_trace,
    pignistic,
    vacuous,
)
from .errors import (
    ConfigurationError,
    ConflictError,
    DegenerateFitError,
    DomainError,
    NoEvidenceError,
    ParseError,
    ValidationError,
    ZonelocError,
)
from .fingerprints import FingerprintDatabase, Observation, load_fingerprint_db, load_observation, pool_samples
from .statfit import Family, FitConfig, FittedDistribution, ObservationModel, fit_observation_model

__version__ = "0.1.0"

__all__ = [
    "ConfidenceMap",
    "ConfigurationError",
    "ConflictError",
    "DegenerateFitError",
    "DomainError",
    "Family",
    "FingerprintDatabase",
    "FitConfig",
    "FittedDistribution",
    "MassFunction",
    "NoEvidenceError",
    "Observation",
    "ObservationModel",
    "ParseError",
    "ValidationError",
    "ZonelocError",
    "build_bba",
    "conjunctive_combine",
    "dempster_normalize",
    "fit_observation_model",
    "load_fingerprint_db",
    "load_observation",
    "localize",
    "localize_trace",
    "pignistic",
    "pool_samples",
    "vacuous",
]
