"""Deterministic random streams.

A draw is addressed by (master_seed, stream_index). Stream states are derived
through numpy's SeedSequence entropy mixing, so any trial of any sweep can be
reproduced in isolation and trials can run concurrently without sharing
generator state. Bit-exact reproducibility is promised for a fixed numpy/
entanglab installation, not across library versions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SeededStream", "as_generator"]


@dataclass(frozen=True)
class SeededStream:
    """Address of one reproducible draw sequence."""

    master_seed: int
    stream_index: int = 0
    subpath: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")
        if self.stream_index < 0:
            raise ValueError("stream_index must be non-negative")

    def generator(self) -> np.random.Generator:
        key = (self.stream_index,) + tuple(self.subpath)
        seq = np.random.SeedSequence(self.master_seed, spawn_key=key)
        return np.random.Generator(np.random.PCG64(seq))

    def stream(self, index: int) -> "SeededStream":
        """Sibling stream `index` under the same master seed."""
        return SeededStream(self.master_seed, int(index))

    def substream(self, index: int) -> "SeededStream":
        """Child stream for nested loops (e.g. resampling inside a trial)."""
        return SeededStream(
            self.master_seed, self.stream_index, self.subpath + (int(index),)
        )


def as_generator(stream) -> np.random.Generator:
    """Accept a SeededStream, a Generator, or an int master seed."""
    if isinstance(stream, np.random.Generator):
        return stream
    if isinstance(stream, SeededStream):
        return stream.generator()
    if isinstance(stream, (int, np.integer)):
        return SeededStream(int(stream)).generator()
    raise TypeError(f"cannot interpret {type(stream).__name__} as a random stream")


def trial_generators(stream, trials: int):
    """One generator per Monte-Carlo trial.

    SeededStream (or int seed) inputs get an independent substream per trial,
    so trials can be computed in any order or concurrently. A raw Generator
    is reused sequentially.
    """
    if isinstance(stream, np.random.Generator):
        for _ in range(trials):
            yield stream
        return
    if isinstance(stream, (int, np.integer)):
        stream = SeededStream(int(stream))
    if not isinstance(stream, SeededStream):
        raise TypeError(f"cannot interpret {type(stream).__name__} as a random stream")
    for t in range(trials):
        yield stream.substream(t).generator()
