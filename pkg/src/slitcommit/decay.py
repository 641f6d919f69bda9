"""Exponential decay of unstable particles and the commit-phase deadline.

A particle species is just a name and a half-life.  Survival over time t
is 2^(-t / half_life); decay times are sampled by inverse transform.  The
deadline rule ends the commit phase a fixed multiple of the half-life
after the last detection, by which point an adversary who stored her
particles unmeasured has lost all but a 2^-k fraction of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid, NegativeTime

__all__ = [
    "ParticleSpecies",
    "DeadlinePolicy",
    "NEUTRON",
    "MUON",
    "BUILTIN_SPECIES",
    "species_by_name",
    "survival_prob",
    "sample_decay_time",
    "commit_deadline",
]


@dataclass(frozen=True)
class ParticleSpecies:
    name: str
    half_life: float  # seconds

    def __post_init__(self):
        if not self.name:
            raise ConfigInvalid("species needs a name")
        if not (self.half_life > 0.0):
            raise ConfigInvalid("half-life must be positive")


@dataclass(frozen=True)
class DeadlinePolicy:
    """Commit phase ends ``multiplier`` half-lives after the last detection."""

    multiplier: float = 10.0

    def __post_init__(self):
        if self.multiplier < 1.0:
            raise ConfigInvalid("deadline multiplier must be >= 1")


NEUTRON = ParticleSpecies("neutron", 608.9)
MUON = ParticleSpecies("muon", 1.523e-6)

BUILTIN_SPECIES = {s.name: s for s in (NEUTRON, MUON)}


def species_by_name(name: str, half_life: float | None = None) -> ParticleSpecies:
    """Look up a built-in species, or build a custom one from a half-life."""
    if name in BUILTIN_SPECIES:
        return BUILTIN_SPECIES[name]
    if half_life is None:
        raise ConfigInvalid(f"unknown species {name!r} and no half-life given")
    return ParticleSpecies(name, float(half_life))


def survival_prob(species: ParticleSpecies, t: float) -> float:
    """Probability that the particle has not decayed after t seconds."""
    if t < 0.0:
        raise NegativeTime(f"t = {t}")
    return float(np.exp2(-t / species.half_life))


def sample_decay_time(species: ParticleSpecies, rng: np.random.Generator,
                      size: int | None = None):
    """Exponential decay time(s) with rate ln2 / half_life.

    Inverse transform on 1-u keeps the median exactly at one half-life:
    u = 0.5 maps to t = half_life.
    """
    u = rng.random() if size is None else rng.random(size)
    t = -np.log1p(-u) * (species.half_life / math.log(2.0))
    return float(t) if size is None else t


def commit_deadline(last_detection: float, species: ParticleSpecies,
                    policy: DeadlinePolicy = DeadlinePolicy()) -> float:
    """Clock time at which the commit phase ends."""
    if last_detection < 0.0:
        raise NegativeTime(f"last_detection = {last_detection}")
    return last_detection + policy.multiplier * species.half_life
