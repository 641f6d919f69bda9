"""Exception types shared across the package."""


class SlitCommitError(Exception):
    """Base class for all errors raised by this package."""


class NotNormalized(SlitCommitError):
    """State vector norm deviates too far from 1."""


class DimensionMismatch(SlitCommitError):
    """Operands have inconsistent or unsupported Hilbert-space dimensions."""


class BadPriors(SlitCommitError):
    """Hypothesis priors are negative or do not sum to 1."""


class ReducedStatesDiffer(SlitCommitError):
    """The reduced states on the kept subsystem disagree, so no local
    unitary can map one joint state onto the other.

    Carries the trace distance between the two reduced states.
    """

    def __init__(self, gap: float):
        self.gap = float(gap)
        super().__init__(f"reduced states differ (trace distance {self.gap:.3e})")


class ImpossibleAttack(SlitCommitError):
    """The two commitment states have distinguishable receiver marginals,
    which blocks the local cheating unitary."""

    def __init__(self, gap: float):
        self.gap = float(gap)
        super().__init__(f"attack impossible: concealing gap {self.gap:.3e}")


class BadGeometry(SlitCommitError):
    """Slit/screen geometry violates its invariants."""


class NegativeTime(SlitCommitError):
    """A physical time argument was negative."""


class StrategyFailure(SlitCommitError):
    """A strategy could not produce the record it was asked for."""


class ConfigInvalid(SlitCommitError):
    """Run configuration violates a constraint."""


class MissingRecords(SlitCommitError):
    """A detected trial has no disclosed measurement value."""


class MalformedUnveil(SlitCommitError):
    """Unveil message is structurally inconsistent with the transcript."""


class BadEpsilon(SlitCommitError):
    """Which-slit error allowance outside (0, 1/2)."""


class TooFewSamples(SlitCommitError):
    """Not enough samples for a meaningful statistical test."""


class BadArgs(SlitCommitError):
    """Invalid arguments to a statistical routine."""
