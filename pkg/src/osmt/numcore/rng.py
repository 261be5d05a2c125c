"""Deterministic, named random streams.

Every consumer of randomness (weight init, dropout, corpus shuffling, the
synthetic-corpus generator) draws from its own stream so that adding draws
in one place never perturbs the others. Streams are derived from the base
seed and a fixed per-name index, so two runs with the same seed see
identical randomness everywhere.
"""

import numpy as np

from ..errors import ConfigError

_STREAM_IDS = {"init": 0, "dropout": 1, "shuffle": 2, "synth": 3}


class RngStreams:
    def __init__(self, seed: int):
        seed = int(seed)
        if seed < 0:
            raise ConfigError(f"seed must be non-negative, got {seed}")
        self.seed = seed

    def stream(self, name: str) -> np.random.Generator:
        """A fresh generator for ``name``, reset to the stream's origin."""
        try:
            idx = _STREAM_IDS[name]
        except KeyError:
            raise ConfigError(
                f"unknown rng stream {name!r}; known: {sorted(_STREAM_IDS)}"
            ) from None
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence([self.seed, idx])))
