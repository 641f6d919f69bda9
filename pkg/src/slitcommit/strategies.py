"""Committer strategies: honest play and the cheating attacks.

The engine owns the physics.  A strategy never reads the slit setting
directly; it only asks the engine to perform a physical measurement on the
current particle, and the engine consults the setting to produce the
outcome.  Each particle supports exactly one measurement -- detection on
the screen, a which-slit determination, or the optimal event-type
discrimination -- after which the particle is gone.

Cheating strategies fabricate their missing unveil data with the strongest
simple policy available to them: positions are drawn from the smooth
single-slit distribution (a cheater without genuine screen data cannot
regenerate fringes), slit labels are uniform guesses (neither screen
positions nor discrimination outcomes carry any which-slit information in
this geometry).
"""

from __future__ import annotations

import numpy as np

from . import optics
from .decay import ParticleSpecies, sample_decay_time
from .errors import MissingRecords, StrategyFailure
from .records import (LEFT, RIGHT, Position, SlitSetting, Transcript,
                      UnveilMessage, WhichSlit)

__all__ = [
    "MeasurementEngine",
    "Strategy",
    "Honest",
    "GuessWhichSlitFromPositions",
    "ForgePositionsFromWhichSlit",
    "StoreAndDelay",
    "HelstromRouter",
    "strategy_by_name",
    "STRATEGY_NAMES",
]

GUESS_DOUBLE = "double"
GUESS_SINGLE = "single"


class MeasurementEngine:
    """Physics of one detected particle, one measurement each.

    Screen positions follow the fringed distribution when both slits are
    open and the smooth envelope otherwise.  Which-slit outcomes are exact
    for single-slit settings and uniform when both slits are open.  The
    event-type discriminator is the optimal two-outcome measurement for
    "both open" (prior 1/3 given detection) versus "one slit" (prior 2/3):
    a projection onto the symmetric/antisymmetric slit superpositions.  A
    both-open particle always lands in the symmetric outcome, a single-slit
    particle falls on either side of the coin, so reading "symmetric" as
    "double" attains the 2/3 optimum -- and the outcome is statistically
    independent of which slit was open.
    """

    def __init__(self, geometry: optics.SlitGeometry, species: ParticleSpecies):
        self.geometry = geometry
        self.species = species
        self.envelope = optics.envelope_pdf(geometry)
        self.doubleslit = optics.doubleslit_pdf(geometry)

    def position(self, setting: SlitSetting, rng: np.random.Generator) -> Position:
        if not setting.passes:
            raise StrategyFailure("no particle reached the screen")
        pdf = self.doubleslit if setting is SlitSetting.BOTH_OPEN else self.envelope
        return Position(optics.sample_position(pdf, rng))

    def which_slit(self, setting: SlitSetting, rng: np.random.Generator) -> WhichSlit:
        if not setting.passes:
            raise StrategyFailure("no particle to measure")
        slit = setting.open_slit
        if slit is None:
            slit = LEFT if rng.random() < 0.5 else RIGHT
        return WhichSlit(slit)

    def type_guess(self, setting: SlitSetting, rng: np.random.Generator) -> str:
        if not setting.passes:
            raise StrategyFailure("no particle to measure")
        if setting is SlitSetting.BOTH_OPEN:
            return GUESS_DOUBLE
        return GUESS_DOUBLE if rng.random() < 0.5 else GUESS_SINGLE

    def decay_time(self, rng: np.random.Generator) -> float:
        return sample_decay_time(self.species, rng)


class Strategy:
    """Base class; subclasses decide measurements and the unveil payload."""

    name = "base"

    def __init__(self, claimed_bit: int):
        if claimed_bit not in (0, 1):
            raise ValueError("claimed bit must be 0 or 1")
        self.claimed_bit = claimed_bit

    def start_run(self, engine: MeasurementEngine,
                  rng: np.random.Generator) -> None:
        """Reset per-run state."""

    def on_detection(self, index: int, announce_time: float,
                     setting: SlitSetting, engine: MeasurementEngine,
                     rng: np.random.Generator):
        """Measurement record for a detected particle (or None)."""
        raise NotImplementedError

    def on_commit_end(self, commit_end_time: float, engine: MeasurementEngine,
                      rng: np.random.Generator) -> dict:
        """Late measurements, keyed by trial index (store-and-delay only)."""
        return {}

    def disclose(self, transcript: Transcript, engine: MeasurementEngine,
                 rng: np.random.Generator) -> UnveilMessage:
        raise NotImplementedError

    # -- shared fabrication helpers -----------------------------------

    @staticmethod
    def _fabricate_positions(count: int, engine: MeasurementEngine,
                             rng: np.random.Generator) -> list[float]:
        return list(optics.sample_position(engine.envelope, rng, size=count))

    @staticmethod
    def _fabricate_labels(count: int, rng: np.random.Generator) -> list[str]:
        return [LEFT if u < 0.5 else RIGHT for u in rng.random(count)]


class Honest(Strategy):
    """Measures per the committed bit; disclosure is the plain truth."""

    def __init__(self, bit: int):
        super().__init__(bit)
        self.name = f"honest-{bit}"

    def on_detection(self, index, announce_time, setting, engine, rng):
        if self.claimed_bit == 0:
            return engine.position(setting, rng)
        return engine.which_slit(setting, rng)

    def disclose(self, transcript, engine, rng):
        entries = []
        for trial in transcript.detected_trials():
            rec = trial.alice_record
            if rec is None:
                raise MissingRecords(f"trial {trial.index} has no record")
            if self.claimed_bit == 0:
                if not isinstance(rec, Position):
                    raise MissingRecords(f"trial {trial.index}: wrong record type")
                entries.append((trial.index, rec.x))
            else:
                if not isinstance(rec, WhichSlit):
                    raise MissingRecords(f"trial {trial.index}: wrong record type")
                entries.append((trial.index, rec.slit))
        return UnveilMessage(bit=self.claimed_bit, entries=tuple(entries))


class GuessWhichSlitFromPositions(Strategy):
    """Commits to positions, then claims bit 1 with guessed labels.

    Screen position carries zero which-slit information here, so uniform
    guessing is already her best play; roughly half the single-slit labels
    come out wrong.
    """

    name = "guess-which-slit"

    def __init__(self):
        super().__init__(claimed_bit=1)

    def on_detection(self, index, announce_time, setting, engine, rng):
        return engine.position(setting, rng)

    def disclose(self, transcript, engine, rng):
        trials = transcript.detected_trials()
        labels = self._fabricate_labels(len(trials), rng)
        entries = tuple((t.index, lab) for t, lab in zip(trials, labels))
        return UnveilMessage(bit=1, entries=entries)


class ForgePositionsFromWhichSlit(Strategy):
    """Commits to which-slit data, then claims bit 0 with forged positions.

    Her records tell her L or R per trial but nothing about which trials
    had both slits open, so every forged position comes from the envelope;
    the both-open subset then fails the fringe test.
    """

    name = "forge-positions"

    def __init__(self):
        super().__init__(claimed_bit=0)

    def on_detection(self, index, announce_time, setting, engine, rng):
        return engine.which_slit(setting, rng)

    def disclose(self, transcript, engine, rng):
        trials = transcript.detected_trials()
        xs = self._fabricate_positions(len(trials), engine, rng)
        entries = tuple((t.index, x) for t, x in zip(trials, xs))
        return UnveilMessage(bit=0, entries=entries)


class StoreAndDelay(Strategy):
    """Stores particles unmeasured, deciding the bit only at the deadline.

    Each stored particle is usable at the deadline only if it has not yet
    decayed; the deadline sits a full multiplier-worth of half-lives after
    the last detection, so survivors are a ~2^-k fraction at best.  Usable
    survivors are measured honestly for the target bit; the rest are
    fabricated.
    """

    def __init__(self, target_bit: int):
        super().__init__(target_bit)
        self.name = f"store-and-delay-{target_bit}"
        self._pending: list[tuple[int, float, SlitSetting]] = []
        self.usable_count = 0
        self.stored_count = 0

    def start_run(self, engine, rng):
        self._pending = []
        self.usable_count = 0
        self.stored_count = 0

    def on_detection(self, index, announce_time, setting, engine, rng):
        self._pending.append((index, announce_time, setting))
        self.stored_count += 1
        return None  # nothing measured yet

    def on_commit_end(self, commit_end_time, engine, rng):
        late = {}
        for index, detected_at, setting in self._pending:
            lifetime = engine.decay_time(rng)
            if lifetime <= commit_end_time - detected_at:
                continue  # decayed in storage; decay products are useless
            self.usable_count += 1
            if self.claimed_bit == 0:
                late[index] = engine.position(setting, rng)
            else:
                late[index] = engine.which_slit(setting, rng)
        return late

    def disclose(self, transcript, engine, rng):
        entries = []
        missing = [t for t in transcript.detected_trials() if t.alice_record is None]
        fab_xs = self._fabricate_positions(len(missing), engine, rng)
        fab_labels = self._fabricate_labels(len(missing), rng)
        fab_at = 0
        for trial in transcript.detected_trials():
            rec = trial.alice_record
            if rec is None:
                value = fab_xs[fab_at] if self.claimed_bit == 0 else fab_labels[fab_at]
                fab_at += 1
            elif self.claimed_bit == 0:
                value = rec.x
            else:
                value = rec.slit
            entries.append((trial.index, value))
        return UnveilMessage(bit=self.claimed_bit, entries=tuple(entries))


class HelstromRouter(Strategy):
    """Spends every particle on the optimal double-vs-single discrimination.

    The router guesses each event's type with the best possible single-shot
    accuracy (2/3 under the 1/3 : 2/3 detection priors), hoping to sort
    trials before choosing a bit.  The discrimination consumes the particle
    and its outcome is provably independent of both the screen position it
    would have shown and the slit it came through, so at unveil time the
    guesses buy nothing: every disclosed value is fabricated.
    """

    def __init__(self, target_bit: int):
        super().__init__(target_bit)
        self.name = f"helstrom-router-{target_bit}"
        self.type_guesses: dict[int, str] = {}

    def start_run(self, engine, rng):
        self.type_guesses = {}

    def on_detection(self, index, announce_time, setting, engine, rng):
        self.type_guesses[index] = engine.type_guess(setting, rng)
        return None

    def disclose(self, transcript, engine, rng):
        trials = transcript.detected_trials()
        if self.claimed_bit == 0:
            values = self._fabricate_positions(len(trials), engine, rng)
        else:
            values = self._fabricate_labels(len(trials), rng)
        entries = tuple((t.index, v) for t, v in zip(trials, values))
        return UnveilMessage(bit=self.claimed_bit, entries=entries)


STRATEGY_NAMES = ("honest", "guess-which-slit", "forge-positions",
                  "store-and-delay", "helstrom-router")


def strategy_by_name(name: str, bit: int = 0) -> Strategy:
    """CLI-facing factory; ``bit`` is the committed/target bit where relevant."""
    if name == "honest":
        return Honest(bit)
    if name == "guess-which-slit":
        return GuessWhichSlitFromPositions()
    if name == "forge-positions":
        return ForgePositionsFromWhichSlit()
    if name == "store-and-delay":
        return StoreAndDelay(bit)
    if name == "helstrom-router":
        return HelstromRouter(bit)
    raise ValueError(f"unknown strategy {name!r}; choose from {STRATEGY_NAMES}")
