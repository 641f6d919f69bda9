"""Run configuration: one serializable record that pins every knob.

Defaults are frozen calibration constants.  The geometry and bin count are
matched pairs: 41 uniform bins over [-2.05, 2.05] put a fringe null at the
center of every other bin for the d/a = 5 pattern, which is what gives the
verifier's fringe test its rejection power at a few hundred events.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .decay import DeadlinePolicy, ParticleSpecies, species_by_name
from .errors import ConfigInvalid
from .optics import SlitGeometry

__all__ = ["Thresholds", "RunConfig"]


@dataclass(frozen=True)
class Thresholds:
    """Verification policy.

    ``alpha`` is the run-level significance budget; each goodness-of-fit
    test passes at level ``alpha * gof_level_fraction`` so that an honest
    run survives all of its tests with comfortable probability.  The
    anti-fringe check keeps the full ``alpha`` (it must *reject*, and a
    looser level means more rejection power) but only activates once
    ``anti_fringe_min`` events are available -- below that the chi-square
    cannot tell the fringed and smooth models apart and the check would
    fail honest runs, so it auto-passes with a warning instead.
    """

    alpha: float = 0.01
    epsilon: float = 0.02
    min_events: int = 30
    anti_fringe_min: int = 250
    gof_level_fraction: float = 0.05
    n_bins: int = 41

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ConfigInvalid("alpha must be in (0, 1)")
        if not (0.0 < self.epsilon < 0.5):
            raise ConfigInvalid("epsilon must be in (0, 1/2)")
        if self.min_events < 1 or self.anti_fringe_min < self.min_events:
            raise ConfigInvalid("bad minimum event counts")
        if not (0.0 < self.gof_level_fraction <= 1.0):
            raise ConfigInvalid("gof_level_fraction must be in (0, 1]")
        if self.n_bins < 2:
            raise ConfigInvalid("need at least 2 bins")

    @property
    def gof_level(self) -> float:
        return self.alpha * self.gof_level_fraction

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "epsilon": self.epsilon,
                "min_events": self.min_events,
                "anti_fringe_min": self.anti_fringe_min,
                "gof_level_fraction": self.gof_level_fraction,
                "n_bins": self.n_bins}

    @classmethod
    def from_dict(cls, data: dict) -> "Thresholds":
        return cls(**data)


@dataclass(frozen=True)
class RunConfig:
    n_detected: int = 1200
    species: ParticleSpecies = field(
        default_factory=lambda: species_by_name("neutron"))
    deadline: DeadlinePolicy = field(default_factory=DeadlinePolicy)
    geometry: SlitGeometry = field(
        default_factory=SlitGeometry.protocol_default)
    thresholds: Thresholds = field(default_factory=Thresholds)
    seed: int = 20260809
    inter_arrival_mean: float | None = None  # seconds; None = one half-life
    transit_latency: float = 0.0

    def __post_init__(self):
        if self.n_detected < 1:
            raise ConfigInvalid("need at least one detection")
        if self.inter_arrival_mean is not None and self.inter_arrival_mean < 0.0:
            raise ConfigInvalid("inter-arrival mean cannot be negative")
        if self.transit_latency < 0.0:
            raise ConfigInvalid("transit latency cannot be negative")
        if self.seed < 0:
            raise ConfigInvalid("seed must be nonnegative")

    @property
    def resolved_inter_arrival(self) -> float:
        if self.inter_arrival_mean is None:
            return self.species.half_life
        return self.inter_arrival_mean

    def with_updates(self, **kwargs) -> "RunConfig":
        return replace(self, **kwargs)

    def to_dict(self) -> dict:
        return {
            "n_detected": self.n_detected,
            "species": {"name": self.species.name,
                        "half_life": self.species.half_life},
            "deadline_multiplier": self.deadline.multiplier,
            "geometry": {
                "slit_width": self.geometry.slit_width,
                "slit_separation": self.geometry.slit_separation,
                "wavelength": self.geometry.wavelength,
                "screen_distance": self.geometry.screen_distance,
                "screen_halfwidth": self.geometry.screen_halfwidth,
                "grid_points": self.geometry.grid_points,
            },
            "thresholds": self.thresholds.to_dict(),
            "seed": self.seed,
            "inter_arrival_mean": self.inter_arrival_mean,
            "transit_latency": self.transit_latency,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        try:
            return cls(
                n_detected=int(data["n_detected"]),
                species=ParticleSpecies(**data["species"]),
                deadline=DeadlinePolicy(float(data["deadline_multiplier"])),
                geometry=SlitGeometry(**data["geometry"]),
                thresholds=Thresholds.from_dict(data["thresholds"]),
                seed=int(data["seed"]),
                inter_arrival_mean=data.get("inter_arrival_mean"),
                transit_latency=float(data.get("transit_latency", 0.0)),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigInvalid(f"bad config: {exc}") from exc
