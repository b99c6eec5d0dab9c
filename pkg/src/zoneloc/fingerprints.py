"""Offline fingerprint samples and online observations.

Fingerprints are stored as a CSV with one RSS sample per row::

    zone_id,ap_id,rss_dbm
    kitchen,ap-01,-61.0

Zones and access points are indexed by order of first appearance, which
fixes the meaning of every zone-set bitmask for the lifetime of a model.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from os import PathLike
from pathlib import Path
from types import MappingProxyType

from .errors import DomainError, ParseError, ValidationError
from .zonesets import members

FINGERPRINT_HEADER = ("zone_id", "ap_id", "rss_dbm")
OBSERVATION_HEADER = ("ap_id", "rss_dbm")


@dataclass(frozen=True)
class FingerprintDatabase:
    """RSS samples keyed by ``(zone index, AP index)``.

    Cells with no samples are simply absent from ``samples``.
    """

    zones: tuple[str, ...]
    aps: tuple[str, ...]
    samples: Mapping[tuple[int, int], tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "zones", tuple(self.zones))
        object.__setattr__(self, "aps", tuple(self.aps))
        _check_identifiers(self.zones, "zone")
        _check_identifiers(self.aps, "AP")
        if len(self.zones) < 2:
            raise ValidationError(f"N_Z < 2: a frame needs at least two zones, got {len(self.zones)}")
        frozen = {}
        for (k, n), values in sorted(self.samples.items()):
            if not (0 <= k < len(self.zones) and 0 <= n < len(self.aps)):
                raise ValidationError(f"sample cell ({k}, {n}) is outside the zone/AP index range")
            values = tuple(float(v) for v in values)
            if not all(math.isfinite(v) for v in values):
                raise ValidationError(f"non-finite RSS in cell ({self.zones[k]}, {self.aps[n]})")
            if values:
                frozen[(k, n)] = values
        object.__setattr__(self, "samples", MappingProxyType(frozen))

    @property
    def n_zones(self) -> int:
        return len(self.zones)

    @property
    def n_aps(self) -> int:
        return len(self.aps)

    def cell(self, zone: int, ap: int) -> tuple[float, ...]:
        return self.samples.get((zone, ap), ())

    def zone_index(self, zone_id: str) -> int:
        return self.zones.index(zone_id)

    def ap_index(self, ap_id: str) -> int:
        return self.aps.index(ap_id)

    def __len__(self) -> int:
        return sum(len(v) for v in self.samples.values())


@dataclass(frozen=True)
class Observation:
    """One online RSS vector; APs missing from ``readings`` were not detected."""

    readings: Mapping[str, float]

    def __post_init__(self) -> None:
        readings = {}
        for ap, value in self.readings.items():
            if not ap:
                raise ValidationError("empty AP identifier in observation")
            value = float(value)
            if not math.isfinite(value):
                raise ValidationError(f"non-finite RSS for AP {ap!r}")
            readings[ap] = value
        object.__setattr__(self, "readings", MappingProxyType(readings))


def _check_identifiers(ids: tuple[str, ...], kind: str) -> None:
    seen = set()
    for name in ids:
        if not isinstance(name, str) or not name:
            raise ValidationError(f"{kind} identifiers must be non-empty strings, got {name!r}")
        if name in seen:
            raise ValidationError(f"duplicate {kind} identifier {name!r}")
        seen.add(name)


def _read_rows(path: str | PathLike, header: tuple[str, ...]) -> Iterable[tuple[int, list[str]]]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or tuple(h.strip() for h in first) != header:
            raise ParseError(f"expected header {','.join(header)!r}", line=1, path=str(path))
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            yield reader.line_num, row


def _parse_rss(text: str, line: int, path: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"non-numeric RSS value {text!r}", line=line, path=path) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite RSS value {text!r}", line=line, path=path)
    return value


def load_fingerprint_db(path: str | PathLike) -> FingerprintDatabase:
    """Read a fingerprint CSV.

    Raises ParseError (with line number) on malformed rows and
    ValidationError when fewer than two distinct zones are present.
    """
    zones: dict[str, int] = {}
    aps: dict[str, int] = {}
    cells: dict[tuple[int, int], list[float]] = {}
    for line, row in _read_rows(path, FINGERPRINT_HEADER):
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line=line, path=str(path))
        zone_id, ap_id, rss_text = (c.strip() for c in row)
        if not zone_id or not ap_id:
            raise ParseError("empty zone or AP identifier", line=line, path=str(path))
        rss = _parse_rss(rss_text, line, str(path))
        k = zones.setdefault(zone_id, len(zones))
        n = aps.setdefault(ap_id, len(aps))
        cells.setdefault((k, n), []).append(rss)
    return FingerprintDatabase(zones=tuple(zones), aps=tuple(aps), samples=cells)


def _row_order(db: FingerprintDatabase) -> list[tuple[int, int]]:
    # Emit cells so that first appearance reproduces db.zones and db.aps order.
    pending = sorted(db.samples)
    order = []
    next_zone = next_ap = 0
    while pending:
        ready = [c for c in pending if c[0] < next_zone and c[1] < next_ap]
        if not ready:
            for want_zone, want_ap in ((True, False), (False, True), (True, True)):
                ready = [
                    c for c in pending
                    if (c[0] == next_zone if want_zone else c[0] < next_zone)
                    and (c[1] == next_ap if want_ap else c[1] < next_ap)
                ]
                if ready:
                    ready = ready[:1]
                    break
        if not ready:
            raise ValidationError("database zone/AP order cannot be reproduced by a row sequence")
        for c in ready:
            pending.remove(c)
            order.append(c)
            next_zone = max(next_zone, c[0] + 1)
            next_ap = max(next_ap, c[1] + 1)
    if next_zone != db.n_zones or next_ap != db.n_aps:
        raise ValidationError("every zone and AP needs at least one sample to be serialized")
    return order


def dumps_fingerprint_db(db: FingerprintDatabase) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FINGERPRINT_HEADER)
    for k, n in _row_order(db):
        for v in db.samples[(k, n)]:
            writer.writerow((db.zones[k], db.aps[n], repr(v)))
    return buf.getvalue()


def save_fingerprint_db(db: FingerprintDatabase, path: str | PathLike) -> None:
    Path(path).write_text(dumps_fingerprint_db(db), encoding="utf-8")


def load_observation(path: str | PathLike) -> Observation:
    readings: dict[str, float] = {}
    for line, row in _read_rows(path, OBSERVATION_HEADER):
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", line=line, path=str(path))
        ap_id, rss_text = (c.strip() for c in row)
        if not ap_id:
            raise ParseError("empty AP identifier", line=line, path=str(path))
        if ap_id in readings:
            raise ParseError(f"duplicate reading for AP {ap_id!r}", line=line, path=str(path))
        readings[ap_id] = _parse_rss(rss_text, line, str(path))
    return Observation(readings)


def dumps_observation(obs: Observation) -> str:
    lines = [",".join(OBSERVATION_HEADER)]
    lines += [f"{ap},{v!r}" for ap, v in obs.readings.items()]
    return "\n".join(lines) + "\n"


def pool_samples(db: FingerprintDatabase, ap: int, zone_set: int) -> list[float]:
    """Concatenate the samples of ``ap`` over every zone in ``zone_set``.

    Zones are visited in ascending index order; samples keep their
    original order within a zone.
    """
    if zone_set <= 0:
        raise DomainError("cannot pool samples over the empty zone set")
    if zone_set >= 1 << db.n_zones:
        raise DomainError(f"zone set {zone_set:#x} is outside a frame of {db.n_zones} zones")
    if not 0 <= ap < db.n_aps:
        raise DomainError(f"AP index {ap} out of range")
    pooled: list[float] = []
    for k in members(zone_set):
        pooled.extend(db.cell(k, ap))
    return pooled
