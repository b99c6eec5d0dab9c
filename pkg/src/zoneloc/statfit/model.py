"""Model selection per (AP, zone set) and the trained observation model."""

from __future__ import annotations

import json
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from os import PathLike
from pathlib import Path
from types import MappingProxyType

from ..errors import ConfigurationError, DegenerateFitError, DomainError, ParseError
from ..fingerprints import FingerprintDatabase, pool_samples
from ..zonesets import nonempty_subsets
from .distributions import Family, check_params, estimate_params, pdf
from .ks import ASYMPTOTIC_COEFF, ks_critical_value, ks_statistic

_LOGGER = logging.getLogger(__name__)

MODEL_VERSION = 1
MAX_ZONES = 16
WARN_ZONES = 12


@dataclass(frozen=True)
class FitConfig:
    alpha: float = 0.05
    families: tuple[Family, ...] = (Family.NORMAL, Family.LOGISTIC)
    min_samples: int = 10
    density_floor: float = 1e-300

    def __post_init__(self) -> None:
        object.__setattr__(self, "families", tuple(Family(f) for f in self.families))
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not any(abs(self.alpha - a) < 1e-12 for a in ASYMPTOTIC_COEFF):
            raise ConfigurationError(
                f"alpha {self.alpha} is not in the K-S table ({', '.join(map(str, ASYMPTOTIC_COEFF))})"
            )
        if not self.families:
            raise ConfigurationError("at least one distribution family is required")
        if len(set(self.families)) != len(self.families):
            raise ConfigurationError("duplicate distribution family in config")
        if int(self.min_samples) != self.min_samples or self.min_samples < 3:
            raise ConfigurationError(f"min_samples must be an integer >= 3, got {self.min_samples}")
        if not self.density_floor > 0.0:
            raise ConfigurationError("density_floor must be positive")


@dataclass(frozen=True)
class FittedDistribution:
    """Selected law for one (AP, zone set) cell.

    A degenerate cell (too few samples, or zero spread for every family)
    carries ``family=None`` and evaluates to density 0.
    """

    family: Family | None
    params: tuple[float, ...]
    ks_stat: float
    accepted: bool
    n: int
    degenerate: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if not 0.0 <= self.ks_stat <= 1.0:
            raise DomainError(f"K-S statistic {self.ks_stat} outside [0, 1]")
        if self.degenerate:
            if self.family is not None or self.params or self.accepted:
                raise DomainError("degenerate cells carry no family, parameters, or acceptance")
        else:
            if self.family is None:
                raise DomainError("non-degenerate cell needs a family")
            object.__setattr__(self, "family", Family(self.family))
            check_params(self.family, self.params)

    @classmethod
    def degenerate_marker(cls, n: int) -> "FittedDistribution":
        return cls(family=None, params=(), ks_stat=1.0, accepted=False, n=n, degenerate=True)

    def density(self, x: float) -> float:
        if self.degenerate:
            return 0.0
        return float(pdf(self.family, self.params, x))


def select_distribution(samples: Sequence[float], config: FitConfig) -> FittedDistribution:
    """Fit every configured family and keep the best one by K-S statistic.

    Families whose statistic does not exceed the critical value are
    accepted; the accepted fit with smallest statistic wins, ties going to
    the earlier family in ``config.families``. When nothing is accepted the
    smallest-statistic fit is returned with ``accepted=False``.
    """
    n = len(samples)
    if n < config.min_samples:
        raise DomainError(f"{n} samples is below min_samples={config.min_samples}")
    critical = ks_critical_value(n, config.alpha)
    candidates = []
    for order, family in enumerate(config.families):
        try:
            params = estimate_params(family, samples)
        except DegenerateFitError:
            continue
        d = ks_statistic(samples, family, params)
        candidates.append((d > critical, d, order, family, params))
    if not candidates:
        return FittedDistribution.degenerate_marker(n)
    rejected, d, _, family, params = min(candidates)
    return FittedDistribution(family=family, params=params, ks_stat=d, accepted=not rejected, n=n)


@dataclass(frozen=True)
class ObservationModel:
    zones: tuple[str, ...]
    aps: tuple[str, ...]
    table: Mapping[tuple[int, int], FittedDistribution] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "zones", tuple(self.zones))
        object.__setattr__(self, "aps", tuple(self.aps))
        expected = len(self.aps) * ((1 << len(self.zones)) - 1)
        if len(self.table) != expected:
            raise DomainError(f"model table has {len(self.table)} cells, expected {expected}")
        for ap, bits in self.table:
            if not (0 <= ap < len(self.aps) and 0 < bits < 1 << len(self.zones)):
                raise DomainError(f"model cell ({ap}, {bits:#x}) outside the frame")
        object.__setattr__(self, "table", MappingProxyType(dict(sorted(self.table.items()))))

    @property
    def n_zones(self) -> int:
        return len(self.zones)

    @property
    def n_aps(self) -> int:
        return len(self.aps)

    def cell(self, ap: int, zone_set: int) -> FittedDistribution:
        return self.table[(ap, zone_set)]

    def densities(self, ap: int, rss: float) -> dict[int, float]:
        """Density of every non-empty zone set's law for ``ap`` at ``rss``."""
        return {bits: self.table[(ap, bits)].density(rss) for bits in nonempty_subsets(self.n_zones)}

    def to_dict(self) -> dict:
        cells = []
        for (ap, bits), fit in self.table.items():
            cells.append(
                {
                    "ap": ap,
                    "set_bits": bits,
                    "family": None if fit.family is None else fit.family.value,
                    "params": list(fit.params),
                    "ks_stat": fit.ks_stat,
                    "accepted": fit.accepted,
                    "degenerate": fit.degenerate,
                    "n": fit.n,
                }
            )
        return {"version": MODEL_VERSION, "zones": list(self.zones), "aps": list(self.aps), "cells": cells}

    @classmethod
    def from_dict(cls, data: Mapping) -> "ObservationModel":
        try:
            if data["version"] != MODEL_VERSION:
                raise ParseError(f"unsupported model version {data['version']!r}")
            table = {}
            for c in data["cells"]:
                fit = FittedDistribution(
                    family=None if c["family"] is None else Family.parse(c["family"]),
                    params=tuple(c["params"]),
                    ks_stat=c["ks_stat"],
                    accepted=bool(c["accepted"]),
                    n=int(c["n"]),
                    degenerate=bool(c["degenerate"]),
                )
                key = (int(c["ap"]), int(c["set_bits"]))
                if key in table:
                    raise ParseError(f"duplicate model cell {key}")
                table[key] = fit
            return cls(zones=tuple(data["zones"]), aps=tuple(data["aps"]), table=table)
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed model: {exc!r}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ObservationModel":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid model JSON: {exc.msg}", line=exc.lineno) from None
        return cls.from_dict(data)

    def save(self, path: str | PathLike) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | PathLike) -> "ObservationModel":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def fit_observation_model(db: FingerprintDatabase, config: FitConfig | None = None) -> ObservationModel:
    """Select a law for every AP and every non-empty zone set.

    Cells whose pooled sample count falls below ``config.min_samples`` are
    stored as degenerate.
    """
    config = config or FitConfig()
    if db.n_zones > MAX_ZONES:
        raise ConfigurationError(f"{db.n_zones} zones exceeds the cap of {MAX_ZONES} (2^N_Z model cells)")
    if db.n_zones > WARN_ZONES:
        _LOGGER.warning("fitting %d zones: %d cells per AP", db.n_zones, (1 << db.n_zones) - 1)
    table = {}
    for ap in range(db.n_aps):
        for bits in nonempty_subsets(db.n_zones):
            pooled = pool_samples(db, ap, bits)
            if len(pooled) < config.min_samples:
                table[(ap, bits)] = FittedDistribution.degenerate_marker(len(pooled))
            else:
                table[(ap, bits)] = select_distribution(pooled, config)
    return ObservationModel(zones=db.zones, aps=db.aps, table=table)
