"""Bitmask encoding of zone subsets.

Bit ``k`` of a zone set is set when zone index ``k`` belongs to it, so the
empty set is ``0`` and the full frame of ``n`` zones is ``(1 << n) - 1``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator

from .errors import DomainError

EMPTY = 0


def full_frame(n_zones: int) -> int:
    return (1 << n_zones) - 1


def popcount(bits: int) -> int:
    return bin(bits).count("1")


def zone_set(indices: Iterable[int]) -> int:
    bits = 0
    for k in indices:
        if k < 0:
            raise DomainError(f"negative zone index {k}")
        bits |= 1 << k
    return bits


def members(bits: int) -> list[int]:
    """Zone indices in ascending order."""
    out = []
    k = 0
    while bits:
        if bits & 1:
            out.append(k)
        bits >>= 1
        k += 1
    return out


def nonempty_subsets(n_zones: int) -> Iterator[int]:
    """All non-empty subsets of an ``n_zones`` frame, in increasing bit order."""
    return iter(range(1, 1 << n_zones))


def check_in_frame(bits: int, n_zones: int) -> None:
    if bits < 0 or bits >= (1 << n_zones):
        raise DomainError(f"zone set {bits:#x} is outside a frame of {n_zones} zones")


def format_set(bits: int, zones: list[str] | tuple[str, ...] | None = None) -> str:
    if bits == EMPTY:
        return "{}"
    idx = members(bits)
    names = [zones[k] if zones is not None else f"Z{k + 1}" for k in idx]
    return "{" + ",".join(names) + "}"
