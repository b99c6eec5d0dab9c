"""Synthetic fingerprints and observations with known ground truth.

Every (zone, AP) cell has a true Normal RSS law. Randomness comes from
numpy's PCG64 generator with explicit seeds; per-trial streams in
:func:`evaluate` are spawned from one ``SeedSequence`` so each trial is
reproducible on its own.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from os import PathLike
from pathlib import Path

import numpy as np

from .belief import DEFAULT_DENSITY_FLOOR, localize
from .errors import DomainError, ParseError, ValidationError
from .fingerprints import FingerprintDatabase, Observation
from .statfit import ObservationModel


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class Scenario:
    """True per-cell RSS laws; ``means`` and ``stdevs`` are indexed ``[zone][ap]``."""

    means: tuple[tuple[float, ...], ...]
    stdevs: tuple[tuple[float, ...], ...]
    samples_per_cell: int
    seed: int

    def __post_init__(self) -> None:
        means = tuple(tuple(float(v) for v in row) for row in self.means)
        stdevs = tuple(tuple(float(v) for v in row) for row in self.stdevs)
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stdevs", stdevs)
        if len(means) < 2:
            raise ValidationError(f"scenario needs at least 2 zones, got {len(means)}")
        n_aps = len(means[0])
        if n_aps < 1:
            raise ValidationError("scenario needs at least one AP")
        if len(stdevs) != len(means) or any(len(r) != n_aps for r in means + stdevs):
            raise ValidationError("means and stdevs must both be n_zones x n_aps")
        if not all(math.isfinite(v) for row in means for v in row):
            raise ValidationError("scenario means must be finite")
        if not all(v > 0.0 and math.isfinite(v) for row in stdevs for v in row):
            raise ValidationError("scenario stdevs must be finite and > 0")
        if int(self.samples_per_cell) != self.samples_per_cell or self.samples_per_cell < 1:
            raise ValidationError(f"samples_per_cell must be an integer >= 1, got {self.samples_per_cell}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValidationError(f"seed must be a non-negative integer, got {self.seed}")

    @property
    def n_zones(self) -> int:
        return len(self.means)

    @property
    def n_aps(self) -> int:
        return len(self.means[0])

    @property
    def zone_ids(self) -> tuple[str, ...]:
        return tuple(f"Z{k + 1}" for k in range(self.n_zones))

    @property
    def ap_ids(self) -> tuple[str, ...]:
        return tuple(f"AP{n + 1}" for n in range(self.n_aps))

    @classmethod
    def from_dict(cls, data: Mapping) -> "Scenario":
        try:
            n_zones = int(data["n_zones"])
            n_aps = int(data["n_aps"])
            if n_zones < 2 or n_aps < 1:
                raise ValidationError(f"need n_zones >= 2 and n_aps >= 1, got {n_zones}, {n_aps}")
            means = [[None] * n_aps for _ in range(n_zones)]
            stdevs = [[None] * n_aps for _ in range(n_zones)]
            for c in data["cells"]:
                k, n = int(c["zone"]), int(c["ap"])
                if not (0 <= k < n_zones and 0 <= n < n_aps):
                    raise ValidationError(f"scenario cell ({k}, {n}) outside {n_zones} zones x {n_aps} APs")
                if means[k][n] is not None:
                    raise ValidationError(f"duplicate scenario cell ({k}, {n})")
                means[k][n] = float(c["mean_dbm"])
                stdevs[k][n] = float(c["stdev_dbm"])
            missing = [(k, n) for k in range(n_zones) for n in range(n_aps) if means[k][n] is None]
            if missing:
                raise ValidationError(f"scenario is missing cells {missing}")
            return cls(means=means, stdevs=stdevs, samples_per_cell=data["samples_per_cell"], seed=data["seed"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed scenario: {exc!r}") from None

    def to_dict(self) -> dict:
        cells = [
            {"zone": k, "ap": n, "mean_dbm": self.means[k][n], "stdev_dbm": self.stdevs[k][n]}
            for k in range(self.n_zones)
            for n in range(self.n_aps)
        ]
        return {
            "n_zones": self.n_zones,
            "n_aps": self.n_aps,
            "cells": cells,
            "samples_per_cell": self.samples_per_cell,
            "seed": self.seed,
        }

    @classmethod
    def load(cls, path: str | PathLike) -> "Scenario":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid scenario JSON: {exc.msg}", line=exc.lineno, path=str(path)) from None
        return cls.from_dict(data)

    def save(self, path: str | PathLike) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")


def generate_db(scenario: Scenario) -> FingerprintDatabase:
    rng = _rng(scenario.seed)
    samples = {}
    for k in range(scenario.n_zones):
        for n in range(scenario.n_aps):
            draws = rng.normal(scenario.means[k][n], scenario.stdevs[k][n], size=scenario.samples_per_cell)
            samples[(k, n)] = tuple(draws.tolist())
    return FingerprintDatabase(zones=scenario.zone_ids, aps=scenario.ap_ids, samples=samples)


def _draw_reading(scenario: Scenario, zone: int, rng: np.random.Generator) -> Observation:
    values = rng.normal(scenario.means[zone], scenario.stdevs[zone])
    return Observation(dict(zip(scenario.ap_ids, values.tolist())))


def generate_observation(scenario: Scenario, true_zone: int, seed) -> Observation:
    """One reading per AP drawn from the true laws of ``true_zone``."""
    if not 0 <= true_zone < scenario.n_zones:
        raise DomainError(f"zone index {true_zone} out of range")
    return _draw_reading(scenario, true_zone, _rng(seed))


def draw_trials(scenario: Scenario, trials: int, seed: int) -> Iterator[tuple[int, Observation]]:
    """Yield ``(true zone index, observation)`` with uniformly random zones."""
    if trials < 0:
        raise DomainError(f"trials must be >= 0, got {trials}")
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = _rng(child)
        zone = int(rng.integers(scenario.n_zones))
        yield zone, _draw_reading(scenario, zone, rng)


@dataclass(frozen=True)
class Report:
    accuracy: float | None
    confusion: tuple[tuple[int, ...], ...]
    mean_true_zone_confidence: float | None
    trials: int

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "confusion": [list(r) for r in self.confusion],
            "mean_true_zone_confidence": self.mean_true_zone_confidence,
            "trials": self.trials,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def evaluate(
    model: ObservationModel,
    scenario: Scenario,
    trials: int,
    seed: int,
    density_floor: float = DEFAULT_DENSITY_FLOOR,
) -> Report:
    """Localize ``trials`` synthetic observations and score the decisions.

    Confusion rows are true zones and columns decided zones, both in the
    scenario's zone order. ``accuracy`` is None when ``trials`` is 0.
    """
    if set(model.zones) != set(scenario.zone_ids) or set(model.aps) != set(scenario.ap_ids):
        raise DomainError(
            f"model identifiers {list(model.zones)}/{list(model.aps)} do not match the scenario's "
            f"{list(scenario.zone_ids)}/{list(scenario.ap_ids)}"
        )
    to_scenario = [scenario.zone_ids.index(z) for z in model.zones]
    confusion = [[0] * scenario.n_zones for _ in range(scenario.n_zones)]
    true_conf = []
    for zone, obs in draw_trials(scenario, trials, seed):
        cmap = localize(model, obs, density_floor)
        decided = to_scenario[cmap.decided_zone]
        confusion[zone][decided] += 1
        true_conf.append(cmap.confidences[model.zones.index(scenario.zone_ids[zone])])
    correct = sum(confusion[k][k] for k in range(scenario.n_zones))
    return Report(
        accuracy=correct / trials if trials else None,
        confusion=tuple(tuple(r) for r in confusion),
        mean_true_zone_confidence=math.fsum(true_conf) / trials if trials else None,
        trials=trials,
    )
