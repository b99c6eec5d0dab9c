"""Belief-function evidence fusion over a frame of zones.

Each detected access point turns its reading into a mass function over the
non-empty zone sets, the mass functions are fused with the conjunctive rule,
conflict is removed once by Dempster normalization, and the pignistic
transformation gives one confidence per zone.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

from .errors import ConflictError, DomainError, NoEvidenceError
from .fingerprints import Observation
from .statfit import ObservationModel
from .zonesets import EMPTY, format_set, full_frame, members, popcount

_LOGGER = logging.getLogger(__name__)

DEFAULT_DENSITY_FLOOR = 1e-300
SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MassFunction:
    """Sparse masses keyed by zone-set bitmask; absent sets carry zero mass."""

    n_zones: int
    masses: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n_zones < 1:
            raise DomainError(f"frame needs at least one zone, got {self.n_zones}")
        limit = 1 << self.n_zones
        clean = {}
        for bits, value in sorted(self.masses.items()):
            if not 0 <= bits < limit:
                raise DomainError(f"set {bits:#x} is outside a frame of {self.n_zones} zones")
            value = float(value)
            if not (value >= 0.0 and math.isfinite(value)):
                raise DomainError(f"mass of {format_set(bits)} must be finite and >= 0, got {value}")
            if value > 0.0:
                clean[bits] = value
        object.__setattr__(self, "masses", MappingProxyType(clean))

    def __getitem__(self, bits: int) -> float:
        return self.masses.get(bits, 0.0)

    @property
    def conflict(self) -> float:
        return self.masses.get(EMPTY, 0.0)

    def focal_sets(self) -> list[int]:
        return list(self.masses)

    def total(self) -> float:
        return math.fsum(self.masses.values())

    def is_bayesian(self) -> bool:
        return all(popcount(b) == 1 for b in self.masses)

    def to_list(self, zones: Iterable[str] | None = None) -> list[dict]:
        zones = tuple(zones) if zones is not None else None
        return [{"set": format_set(b, zones), "bits": b, "mass": v} for b, v in self.masses.items()]


def vacuous(n_zones: int) -> MassFunction:
    """Total ignorance: all mass on the full frame."""
    if n_zones < 2:
        raise DomainError(f"a frame needs at least 2 zones, got {n_zones}")
    return MassFunction(n_zones, {full_frame(n_zones): 1.0})


def masses_from_weights(
    n_zones: int, weights: Mapping[int, float], density_floor: float = DEFAULT_DENSITY_FLOOR
) -> MassFunction:
    """Normalize non-negative per-set weights into a mass function.

    When the weights sum below ``density_floor`` the source abstains and
    the vacuous mass function is returned.
    """
    for bits, w in weights.items():
        if bits == EMPTY:
            raise DomainError("weights are defined on non-empty sets only")
        if not (w >= 0.0 and math.isfinite(w)):
            raise DomainError(f"weight of {format_set(bits)} must be finite and >= 0, got {w}")
    total = math.fsum(weights.values())
    if not total >= density_floor:
        return vacuous(n_zones)
    return MassFunction(n_zones, {bits: w / total for bits, w in weights.items()})


def build_bba(
    model: ObservationModel, ap: int, rss: float, density_floor: float = DEFAULT_DENSITY_FLOOR
) -> MassFunction:
    """Mass function of one AP: each set's fitted density at ``rss``, normalized."""
    if not 0 <= ap < model.n_aps:
        raise DomainError(f"AP index {ap} out of range for a model with {model.n_aps} APs")
    return masses_from_weights(model.n_zones, model.densities(ap, rss), density_floor)


def conjunctive_combine(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Unnormalized conjunctive rule; conflicting pairs land on the empty set."""
    if m1.n_zones != m2.n_zones:
        raise DomainError(f"frame mismatch: {m1.n_zones} vs {m2.n_zones} zones")
    out: dict[int, float] = {}
    for b1, v1 in m1.masses.items():
        for b2, v2 in m2.masses.items():
            key = b1 & b2
            out[key] = out.get(key, 0.0) + v1 * v2
    return MassFunction(m1.n_zones, out)


def dempster_normalize(m: MassFunction, step: str | None = None) -> MassFunction:
    """Drop the empty-set mass and rescale the rest to sum to one.

    The divisor is the summed non-empty mass, i.e. ``1 - m(empty)`` for a
    mass function that sums to one. ``step`` names the fusion step in the
    ConflictError raised on total conflict.
    """
    if m.conflict == 0.0:
        return m
    kept = {b: v for b, v in m.masses.items() if b != EMPTY}
    mass_kept = math.fsum(kept.values())
    if not mass_kept > 0.0:
        raise ConflictError("total conflict: all fused mass is on the empty set", step=step)
    return MassFunction(m.n_zones, {b: v / mass_kept for b, v in kept.items()})


def pignistic(m: MassFunction) -> list[float]:
    """Share each set's mass equally among its zones; one value per zone."""
    if m.conflict != 0.0:
        raise DomainError("pignistic transform needs m(empty) = 0; normalize first")
    terms: list[list[float]] = [[] for _ in range(m.n_zones)]
    for bits, v in m.masses.items():
        idx = members(bits)
        share = v / len(idx)
        for k in idx:
            terms[k].append(share)
    return [math.fsum(t) for t in terms]


@dataclass(frozen=True)
class ConfidenceMap:
    zones: tuple[str, ...]
    confidences: tuple[float, ...]
    decided_zone: int

    @classmethod
    def from_confidences(cls, zones: Iterable[str], confidences: Iterable[float]) -> "ConfidenceMap":
        conf = tuple(float(c) for c in confidences)
        # list.index returns the first maximum: ties go to the lowest zone index.
        return cls(zones=tuple(zones), confidences=conf, decided_zone=conf.index(max(conf)))

    @property
    def decided_zone_id(self) -> str:
        return self.zones[self.decided_zone]

    def to_json(self) -> str:
        conf = ", ".join(f"{c:.6f}" for c in self.confidences)
        return (
            "{"
            f'"zones": {json.dumps(list(self.zones))}, '
            f'"confidences": [{conf}], '
            f'"decided_zone": {json.dumps(self.decided_zone_id)}'
            "}"
        )


@dataclass(frozen=True)
class FusionTrace:
    """Intermediate results of one localization."""

    bbas: tuple[tuple[str, MassFunction], ...]
    combined: MassFunction
    fused: MassFunction
    result: ConfidenceMap
    ignored_aps: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        zones = self.result.zones
        return {
            "bbas": [{"ap": ap, "masses": m.to_list(zones)} for ap, m in self.bbas],
            "conjunctive": self.combined.to_list(zones),
            "fused": self.fused.to_list(zones),
            "ignored_aps": list(self.ignored_aps),
            "zones": list(zones),
            "confidences": list(self.result.confidences),
            "decided_zone": self.result.decided_zone_id,
        }


def localize_trace(
    model: ObservationModel, obs: Observation, density_floor: float = DEFAULT_DENSITY_FLOOR
) -> FusionTrace:
    """Run the full fusion pipeline, keeping every intermediate mass function.

    APs are folded in the order they appear in ``obs``; undetected APs
    contribute nothing (the vacuous mass function is the identity).
    """
    ap_index = {ap: n for n, ap in enumerate(model.aps)}
    bbas = []
    ignored = []
    for ap_id, rss in obs.readings.items():
        if ap_id not in ap_index:
            ignored.append(ap_id)
            continue
        bbas.append((ap_id, build_bba(model, ap_index[ap_id], rss, density_floor)))
    if ignored:
        _LOGGER.warning("ignored %d reading(s) from APs absent from the model: %s", len(ignored), ", ".join(ignored))
    if not bbas:
        raise NoEvidenceError("no evidence: the observation has no reading for any modeled AP")

    combined = bbas[0][1]
    for ap_id, bba in bbas[1:]:
        combined = conjunctive_combine(combined, bba)
        # Once every non-empty product is gone no later AP can restore it.
        if all(b == EMPTY for b in combined.masses):
            raise ConflictError("total conflict: all fused mass is on the empty set", step=f"fusing AP {ap_id!r}")
    fused = dempster_normalize(combined, step="final normalization")
    result = ConfidenceMap.from_confidences(model.zones, pignistic(fused))
    return FusionTrace(bbas=tuple(bbas), combined=combined, fused=fused, result=result, ignored_aps=tuple(ignored))


def localize(
    model: ObservationModel, obs: Observation, density_floor: float = DEFAULT_DENSITY_FLOOR
) -> ConfidenceMap:
    """Per-zone confidence for ``obs`` and the decided zone."""
    return localize_trace(model, obs, density_floor).result
