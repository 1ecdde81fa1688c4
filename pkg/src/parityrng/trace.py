"""Measurement-record data model for the decay-timing RNG.

A run of N time bins can be recorded in four interchangeable formats:

* ``BinTrace``     -- one bit per bin, 1 = the physical detector fired;
* ``TimingVector`` -- the increasing list of bins that fired, with the
  sentinel ``(0,)`` for a silent run (bijective with ``BinTrace``);
* ``DualTrace``    -- per-bin outcome of the virtual detector pair
  (up / down / none / both), used by the security analysis;
* ``ReducedTrace`` -- per-bin count class (none / single / both) of the
  virtual pair.

All types are immutable values with structural equality; payloads are
stored as ``bytes`` (one byte per bin) so traces of millions of bins
stay cheap to build, hash and compare.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "Symbol",
    "Reduced",
    "BinTrace",
    "TimingVector",
    "DualTrace",
    "ReducedTrace",
    "timings_from_bins",
    "bins_from_timings",
    "g_map",
    "h_map",
    "single_count",
]


class Symbol(IntEnum):
    """Outcome of the virtual detector pair in one time bin."""

    NONE = 0
    UP = 1
    DOWN = 2
    BOTH = 3


class Reduced(IntEnum):
    """How many of the two virtual detectors fired in one time bin."""

    NONE = 0
    SINGLE = 1
    BOTH = 2


def _as_payload(values, allowed: frozenset[int], what: str) -> bytes:
    """Normalize an iterable / bytes / ndarray of small ints to bytes."""
    if isinstance(values, (bytes, bytearray)):
        data = bytes(values)
    elif isinstance(values, np.ndarray):
        data = values.astype(np.uint8, copy=False).tobytes()
    else:
        data = bytes(int(v) for v in values)
    bad = set(data) - allowed
    if bad:
        raise ValueError(f"{what} contains invalid values {sorted(bad)}")
    return data


_BITS = frozenset({0, 1})
_SYMBOLS = frozenset(int(s) for s in Symbol)
_REDUCED = frozenset(int(r) for r in Reduced)


@dataclass(frozen=True)
class BinTrace:
    """Per-bin detection bits of the physical detector.

    ``bin_width`` is the bin duration in seconds; it is carried as
    metadata only and does not participate in equality.
    """

    bits: bytes
    bin_width: float = field(default=1.0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "bits", _as_payload(self.bits, _BITS, "BinTrace"))
        if len(self.bits) < 1:
            raise ValueError("BinTrace needs at least one time bin")
        if self.bin_width <= 0:
            raise ValueError("bin_width must be positive")

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.bits, dtype=np.uint8)


@dataclass(frozen=True)
class TimingVector:
    """Detection timings: strictly increasing bin indices, or ``(0,)``.

    The sentinel ``(0,)`` (a one-element sequence) records a run with no
    detection at all; it is a distinct value, not an empty list.
    """

    timings: tuple[int, ...]

    def __post_init__(self):
        t = tuple(int(v) for v in self.timings)
        object.__setattr__(self, "timings", t)
        if len(t) == 0:
            raise ValueError("use the sentinel (0,) for a run with no detection")
        if t == (0,):
            return
        if t[0] < 1:
            raise ValueError("timings must be >= 1 (or the sentinel (0,))")
        if any(a >= b for a, b in zip(t, t[1:])):
            raise ValueError("timings must be strictly increasing")

    @property
    def n_det(self) -> int:
        return len(self.timings)

    @property
    def is_empty(self) -> bool:
        return self.timings == (0,)


@dataclass(frozen=True)
class DualTrace:
    """Per-bin outcomes of the virtual up/down detector pair."""

    symbols: bytes

    def __post_init__(self):
        object.__setattr__(
            self, "symbols", _as_payload(self.symbols, _SYMBOLS, "DualTrace")
        )
        if len(self.symbols) < 1:
            raise ValueError("DualTrace needs at least one time bin")

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[Symbol]:
        return (Symbol(s) for s in self.symbols)

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.symbols, dtype=np.uint8)

    @classmethod
    def of(cls, symbols: Iterable[Symbol | int]) -> "DualTrace":
        return cls(bytes(int(s) for s in symbols))


@dataclass(frozen=True)
class ReducedTrace:
    """Per-bin count classes (none / single / both) of the virtual pair."""

    symbols: bytes

    def __post_init__(self):
        object.__setattr__(
            self, "symbols", _as_payload(self.symbols, _REDUCED, "ReducedTrace")
        )
        if len(self.symbols) < 1:
            raise ValueError("ReducedTrace needs at least one time bin")

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[Reduced]:
        return (Reduced(s) for s in self.symbols)

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.symbols, dtype=np.uint8)

    @classmethod
    def of(cls, symbols: Iterable[Reduced | int]) -> "ReducedTrace":
        return cls(bytes(int(s) for s in symbols))


def timings_from_bins(z: BinTrace) -> TimingVector:
    """List the 1-based indices of fired bins; ``(0,)`` if none fired."""
    hits = tuple(int(i) + 1 for i in np.flatnonzero(z.to_array()))
    return TimingVector(hits if hits else (0,))


def bins_from_timings(i: TimingVector, n_bins: int) -> BinTrace:
    """Inverse of :func:`timings_from_bins` for a run of ``n_bins`` bins."""
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    bits = bytearray(n_bins)
    if not i.is_empty:
        if i.timings[-1] > n_bins:
            raise ValueError(
                f"timing {i.timings[-1]} exceeds run length {n_bins}"
            )
        for t in i.timings:
            bits[t - 1] = 1
    return BinTrace(bytes(bits))


# Per-symbol tables for the two classification maps.  The physical
# detector is the down-detector, so only down and both produce a bit.
_G_TABLE = bytes([0, 0, 1, 1])  # NONE, UP, DOWN, BOTH -> bit
_H_TABLE = bytes(
    [int(Reduced.NONE), int(Reduced.SINGLE), int(Reduced.SINGLE), int(Reduced.BOTH)]
)


def g_map(w: DualTrace) -> BinTrace:
    """Emulate the physical detector's bit from each pair outcome.

    up and none give 0; down and both give 1 (the physical detector is
    the down-detector and never sees the mirror detector's hits).
    """
    return BinTrace(bytes(_G_TABLE[s] for s in w.symbols))


def h_map(w: DualTrace) -> ReducedTrace:
    """Classify each pair outcome by how many detectors fired."""
    return ReducedTrace(bytes(_H_TABLE[s] for s in w.symbols))


def single_count(w_tilde: ReducedTrace) -> int:
    """Number of bins where exactly one of the two detectors fired."""
    return w_tilde.symbols.count(int(Reduced.SINGLE))
