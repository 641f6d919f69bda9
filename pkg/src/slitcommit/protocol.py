"""The two-party commit/unveil state machine and the receiver's checks.

Commit: the receiver emits particles toward the slits under uniformly
random settings (both open, left shut, right shut, both shut); any
particle passing at least one open slit is detected by the committer, who
announces only the detection.  The run ends once the target count is
reached, and the commit phase closes a deadline's worth of half-lives
after the last detection.

Unveil: the committer discloses the bit and one value per detected trial;
the receiver partitions the values by his private settings and tests them.
For bit 0 the both-open positions must fit the fringed distribution, the
single-slit positions must fit the envelope and must *not* fit the
fringed one; for bit 1 the single-slit labels must match the open slit up
to a small error allowance and the both-open labels must be balanced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import RunConfig, Thresholds
from .decay import commit_deadline
from .errors import BadEpsilon, MalformedUnveil, TooFewSamples
from .optics import SlitGeometry, doubleslit_pdf, envelope_pdf
from .records import (LEFT, RIGHT, BobView, SlitSetting, TestOutcome,
                      Transcript, TrialRecord, UnveilMessage,
                      VerificationReport)
from .seeding import derive_rng
from .stats import binomial_confint, binomial_tail, chi_square_gof
from .strategies import MeasurementEngine, Strategy

__all__ = [
    "draw_setting",
    "run_trial",
    "run_commit",
    "unveil",
    "verify",
    "attack_sweep",
    "SweepPoint",
    "cheat_acceptance_bound",
]

_SETTINGS = (SlitSetting.BOTH_OPEN, SlitSetting.LEFT_SHUT,
             SlitSetting.RIGHT_SHUT, SlitSetting.BOTH_SHUT)


def draw_setting(rng: np.random.Generator) -> SlitSetting:
    """One of the four slit settings, each with probability 1/4."""
    return _SETTINGS[rng.integers(0, 4)]


def run_trial(index: int, emit_time: float, setting: SlitSetting,
              strategy: Strategy, engine: MeasurementEngine,
              rng: np.random.Generator, transit_latency: float) -> TrialRecord:
    """Send one particle through the chosen setting.

    Detection happens exactly when at least one slit is open; the
    strategy's measurement (if any) produces the committer-private record.
    """
    detected = setting.passes
    announce_time = emit_time + transit_latency
    record = None
    if detected:
        record = strategy.on_detection(index, announce_time, setting, engine, rng)
    return TrialRecord(index=index, emit_time=emit_time, setting=setting,
                       detected=detected, alice_record=record,
                       announce_time=announce_time)


def run_commit(config: RunConfig, strategy: Strategy,
               rng: np.random.Generator | None = None) -> Transcript:
    """Run the commit phase until the target number of detections.

    The generator defaults to the stream derived from (config.seed, 0);
    sweeps pass their own per-repetition streams.
    """
    if rng is None:
        rng = derive_rng(config.seed, 0)
    engine = MeasurementEngine(config.geometry, config.species)
    strategy.start_run(engine, rng)

    mean_gap = config.resolved_inter_arrival
    trials: list[TrialRecord] = []
    clock = 0.0
    detected = 0
    last_detection = 0.0
    index = 0
    while detected < config.n_detected:
        if mean_gap > 0.0:
            clock += rng.exponential(mean_gap)
        setting = draw_setting(rng)
        trial = run_trial(index, clock, setting, strategy, engine, rng,
                          config.transit_latency)
        trials.append(trial)
        if trial.detected:
            detected += 1
            last_detection = trial.announce_time
        index += 1

    end_time = commit_deadline(last_detection, config.species, config.deadline)
    late = strategy.on_commit_end(end_time, engine, rng)
    if late:
        trials = [
            t if t.index not in late else TrialRecord(
                index=t.index, emit_time=t.emit_time, setting=t.setting,
                detected=t.detected, alice_record=late[t.index],
                announce_time=t.announce_time)
            for t in trials
        ]

    header = {"config": config.to_dict(), "strategy": strategy.name}
    return Transcript(trials=trials, n_detected=detected,
                      commit_end_time=end_time, header=header)


def unveil(strategy: Strategy, transcript: Transcript,
           rng: np.random.Generator,
           engine: MeasurementEngine | None = None) -> UnveilMessage:
    """Package the committer's disclosure for her claimed bit."""
    if engine is None:
        config = RunConfig.from_dict(transcript.header["config"])
        engine = MeasurementEngine(config.geometry, config.species)
    return strategy.disclose(transcript, engine, rng)


def _gof_outcome(name: str, samples, pdf, thresholds: Thresholds,
                 invert: bool, min_events: int) -> TestOutcome:
    """Run one goodness-of-fit check, honoring the activation floor.

    ``invert=False``: data must fit (pass when p >= per-test level).
    ``invert=True``: data must *not* fit (pass when p < alpha).
    """
    if len(samples) < min_events:
        return TestOutcome(name=name, statistic=float("nan"), p_value=float("nan"),
                           threshold=thresholds.alpha if invert else thresholds.gof_level,
                           passed=True, skipped=True)
    try:
        res = chi_square_gof(samples, pdf, thresholds.n_bins,
                             min_samples=min_events)
    except TooFewSamples:
        return TestOutcome(name=name, statistic=float("nan"), p_value=float("nan"),
                           threshold=thresholds.alpha if invert else thresholds.gof_level,
                           passed=True, skipped=True)
    if invert:
        return TestOutcome(name=name, statistic=res.statistic, p_value=res.p_value,
                           threshold=thresholds.alpha,
                           passed=res.p_value < thresholds.alpha)
    return TestOutcome(name=name, statistic=res.statistic, p_value=res.p_value,
                       threshold=thresholds.gof_level,
                       passed=res.p_value >= thresholds.gof_level)


def verify(bob: BobView | Transcript, msg: UnveilMessage,
           thresholds: Thresholds, geometry: SlitGeometry) -> VerificationReport:
    """The receiver's consistency decision.

    Raises MalformedUnveil for structural problems (count or index
    mismatches, out-of-window positions, wrong value types); statistical
    failures produce an ordinary rejected report instead.
    """
    view = bob.bob_view() if isinstance(bob, Transcript) else bob
    if len(msg.entries) != view.n_detected:
        raise MalformedUnveil(
            f"{len(msg.entries)} disclosed records != {view.n_detected} detections")
    disclosed = dict(msg.entries)
    if len(disclosed) != len(msg.entries) or set(disclosed) != set(view.settings):
        raise MalformedUnveil("disclosed trial indexes do not match detections")

    both_open = []
    single = []      # (value, open slit) for bit 1; value alone for bit 0
    for index, setting in view.settings.items():
        value = disclosed[index]
        if setting is SlitSetting.BOTH_OPEN:
            both_open.append(value)
        else:
            single.append((value, setting.open_slit))

    tests: list[TestOutcome] = []
    if msg.bit == 0:
        lo, hi = -geometry.screen_halfwidth, geometry.screen_halfwidth
        values = [v for v in disclosed.values()]
        if not all(isinstance(v, float) and lo <= v <= hi for v in values):
            raise MalformedUnveil("positions must be floats inside the screen window")
        fringed = doubleslit_pdf(geometry)
        smooth = envelope_pdf(geometry)
        single_xs = [v for v, _ in single]
        tests.append(_gof_outcome("fringe_fit", both_open, fringed,
                                  thresholds, invert=False,
                                  min_events=thresholds.min_events))
        tests.append(_gof_outcome("envelope_fit", single_xs, smooth,
                                  thresholds, invert=False,
                                  min_events=thresholds.min_events))
        tests.append(_gof_outcome("anti_fringe", single_xs, fringed,
                                  thresholds, invert=True,
                                  min_events=thresholds.anti_fringe_min))
    else:
        if not all(v in (LEFT, RIGHT) for v in disclosed.values()):
            raise MalformedUnveil("slit labels must be L or R")
        n_single = len(single)
        if n_single < thresholds.min_events:
            tests.append(TestOutcome("which_slit_accuracy", float("nan"),
                                     float("nan"), thresholds.epsilon,
                                     passed=True, skipped=True))
        else:
            errors = sum(1 for value, truth in single if value != truth)
            rate = errors / n_single
            tests.append(TestOutcome("which_slit_accuracy", float(errors), rate,
                                     thresholds.epsilon,
                                     passed=rate <= thresholds.epsilon))
        m = len(both_open)
        if m < thresholds.min_events:
            tests.append(TestOutcome("both_open_balance", float("nan"),
                                     float("nan"), 3.0, passed=True, skipped=True))
        else:
            n_left = sum(1 for v in both_open if v == LEFT)
            sigma = math.sqrt(m) / 2.0
            z = abs(n_left - m / 2.0) / sigma
            tests.append(TestOutcome("both_open_balance", float(n_left), z, 3.0,
                                     passed=z <= 3.0))

    return VerificationReport(accepted=all(t.passed for t in tests),
                              tests=tuple(tests))


@dataclass(frozen=True)
class SweepPoint:
    n_detected: int
    strategy: str
    acceptances: int
    repetitions: int
    estimate: float
    ci_low: float
    ci_high: float


def attack_sweep(config: RunConfig, strategy: Strategy,
                 repetitions: int) -> SweepPoint:
    """Monte Carlo acceptance probability of a strategy at one N.

    Repetition i uses the stream derived from (config.seed, i); malformed
    unveils count as rejections.
    """
    if repetitions < 1:
        raise ValueError("need at least one repetition")
    accepted = 0
    for rep in range(repetitions):
        rng = derive_rng(config.seed, rep)
        transcript = run_commit(config, strategy, rng)
        engine = MeasurementEngine(config.geometry, config.species)
        msg = unveil(strategy, transcript, rng, engine)
        try:
            report = verify(transcript, msg, config.thresholds, config.geometry)
        except MalformedUnveil:
            continue
        if report.accepted:
            accepted += 1
    low, high = binomial_confint(accepted, repetitions)
    return SweepPoint(n_detected=config.n_detected, strategy=strategy.name,
                      acceptances=accepted, repetitions=repetitions,
                      estimate=accepted / repetitions, ci_low=low, ci_high=high)


def cheat_acceptance_bound(n_detected: int, epsilon: float,
                           single_fraction: float = 2.0 / 3.0) -> float:
    """Closed-form ceiling on pure-guess label forging.

    A committer who never measured which-slit data faces m single-slit
    events (m = single_fraction * N in expectation) and must get at least
    ceil((1 - epsilon) * m) of her fair-coin guesses right; the exact
    binomial tail of that event collapses doubly exponentially in N.
    """
    if not (0.0 < epsilon < 0.5):
        raise BadEpsilon(f"epsilon = {epsilon}")
    if n_detected < 1 or not (0.0 < single_fraction <= 1.0):
        raise BadEpsilon("bad detection mix")
    m = int(round(n_detected * single_fraction))
    need = math.ceil((1.0 - epsilon) * m)
    return binomial_tail(m, need, 0.5)
