"""Double-slit bit-commitment simulator and analysis library.

Subpackages by concern: ``quantum`` (small-dimension linear algebra and
state discrimination), ``optics`` (screen distributions and sampling),
``decay`` (half-lives and deadlines), ``stats`` (the verifier's tests),
``protocol`` (the commit/unveil state machine and attack sweeps),
``nogo`` (the purification-attack toy demo), ``cli`` (the entry point).
"""

from .config import RunConfig, Thresholds
from .decay import MUON, NEUTRON, DeadlinePolicy, ParticleSpecies
from .optics import ScreenPdf, SlitGeometry
from .quantum import DensityMatrix, NumericPolicy, PureState
from .records import (SlitSetting, Transcript, TrialRecord, UnveilMessage,
                      VerificationReport)
from .seeding import derive_rng

__all__ = [
    "RunConfig",
    "Thresholds",
    "ParticleSpecies",
    "DeadlinePolicy",
    "NEUTRON",
    "MUON",
    "SlitGeometry",
    "ScreenPdf",
    "PureState",
    "DensityMatrix",
    "NumericPolicy",
    "SlitSetting",
    "TrialRecord",
    "Transcript",
    "UnveilMessage",
    "VerificationReport",
    "derive_rng",
]

__version__ = "0.1.0"
