"""Deterministic random-stream derivation.

All randomness in a simulation flows from one master seed.  Independent
streams (runs, repetitions, calibration experiments) are derived with
``derive_rng(master_seed, *key)``, which feeds the integer key path into
``numpy.random.SeedSequence(master_seed, spawn_key=key)``.  Two calls with
the same master seed and key path always yield generators that produce
bit-identical draw sequences; distinct key paths yield statistically
independent streams.

Within a single protocol run the trial loop consumes one generator
sequentially, so a run is reproducible from ``(master_seed, run_key)``
alone.
"""

from __future__ import annotations

import numpy as np


def derive_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Return the generator for stream ``key`` under ``master_seed``."""
    if master_seed < 0:
        raise ValueError("master seed must be nonnegative")
    seq = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(seq)
