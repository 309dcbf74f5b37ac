"""Deterministic random-number substreams.

Every stochastic input of a replication comes from a stream keyed by
``(master_seed, replication_index, purpose)``. Identical keys always yield the
identical draw sequence; distinct purposes are statistically independent
substreams of the same replication. This is what makes paired comparisons with
common random numbers work: both engines and all scenarios consume the same
arrival and service randomness, while engine-specific choices (the agent-based
random pick) burn their own stream without disturbing the shared ones.

Streams are numpy PCG64 generators derived through ``SeedSequence`` spawn keys,
so derivation is pure: deriving the same stream twice gives two independent
objects that produce the same sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .types import ValidationError

ARRIVALS = "arrivals"
SERVICES = "services"
HELP_FLAGS = "help_flags"
DWELL = "dwell"
ABS_CHOICE = "abs_choice"

PURPOSES = (ARRIVALS, SERVICES, HELP_FLAGS, DWELL, ABS_CHOICE)
_PURPOSE_INDEX = {name: i for i, name in enumerate(PURPOSES)}

_MAX_SEED = 2**64


class RngStream:
    """One substream of uniform randomness."""

    __slots__ = ("master_seed", "replication_index", "purpose", "_gen")

    def __init__(self, master_seed: int, replication_index: int, purpose: str):
        if not (isinstance(master_seed, int) and 0 <= master_seed < _MAX_SEED):
            raise ValidationError(
                f"master_seed must be a 64-bit unsigned integer (got {master_seed!r})"
            )
        if not (isinstance(replication_index, int) and replication_index >= 0):
            raise ValidationError(
                f"replication_index must be a non-negative integer (got {replication_index!r})"
            )
        if purpose not in _PURPOSE_INDEX:
            raise ValidationError(f"unknown stream purpose {purpose!r}; valid: {PURPOSES}")
        self.master_seed = master_seed
        self.replication_index = replication_index
        self.purpose = purpose
        seq = np.random.SeedSequence(
            master_seed, spawn_key=(replication_index, _PURPOSE_INDEX[purpose])
        )
        self._gen = np.random.Generator(np.random.PCG64(seq))

    def random(self) -> float:
        """Next uniform double in [0, 1)."""
        return float(self._gen.random())

    def random_array(self, n: int) -> np.ndarray:
        """Next ``n`` uniforms as an array (same sequence as ``n`` scalar calls)."""
        return self._gen.random(n)

    def exponential(self, mean: float) -> float:
        """Exponential variate via inverse transform; consumes one uniform."""
        return -mean * math.log1p(-self.random())

    def pick_index(self, n: int) -> int:
        """Uniform index in ``range(n)``; consumes one uniform."""
        if n <= 0:
            raise ValidationError("pick_index needs a non-empty range")
        i = int(self.random() * n)
        return n - 1 if i >= n else i

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (
            f"RngStream(master_seed={self.master_seed}, "
            f"replication_index={self.replication_index}, purpose={self.purpose!r})"
        )


def derive_stream(master_seed: int, replication_index: int, purpose: str) -> RngStream:
    """Derive the substream for one purpose of one replication."""
    return RngStream(master_seed, replication_index, purpose)


@dataclass(frozen=True)
class StreamBundle:
    """All five purpose streams of a single replication."""

    arrivals: RngStream
    services: RngStream
    help_flags: RngStream
    dwell: RngStream
    abs_choice: RngStream


def derive_streams(master_seed: int, replication_index: int) -> StreamBundle:
    return StreamBundle(
        *(derive_stream(master_seed, replication_index, p) for p in PURPOSES)
    )
