"""Per-trial protocol records, transcripts, and their serialized views.

A transcript is the full run history; what each party may see of it is a
projection.  The public projection carries only detection flags and
announce times (what travels over the classical channel), the receiver's
private projection adds the slit settings he chose, and the committer's
private projection adds her measurement records.  Files are JSON lines:
one header record with config and seed, then one record per trial.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import MalformedUnveil

__all__ = [
    "SlitSetting",
    "Position",
    "WhichSlit",
    "TrialRecord",
    "Transcript",
    "BobView",
    "UnveilMessage",
    "TestOutcome",
    "VerificationReport",
    "write_jsonl",
    "read_jsonl",
]

LEFT = "L"
RIGHT = "R"


class SlitSetting(Enum):
    BOTH_OPEN = "both_open"
    LEFT_SHUT = "left_shut"
    RIGHT_SHUT = "right_shut"
    BOTH_SHUT = "both_shut"

    @property
    def passes(self) -> bool:
        """Whether a particle can reach the screen at all."""
        return self is not SlitSetting.BOTH_SHUT

    @property
    def open_slit(self) -> str | None:
        """The single open slit label, or None if zero or two are open."""
        if self is SlitSetting.LEFT_SHUT:
            return RIGHT
        if self is SlitSetting.RIGHT_SHUT:
            return LEFT
        return None


@dataclass(frozen=True)
class Position:
    x: float

    def to_json(self):
        return {"kind": "position", "x": self.x}


@dataclass(frozen=True)
class WhichSlit:
    slit: str  # "L" or "R"

    def __post_init__(self):
        if self.slit not in (LEFT, RIGHT):
            raise ValueError(f"slit must be L or R, got {self.slit!r}")

    def to_json(self):
        return {"kind": "which_slit", "slit": self.slit}


def record_from_json(obj):
    if obj is None:
        return None
    if obj["kind"] == "position":
        return Position(float(obj["x"]))
    if obj["kind"] == "which_slit":
        return WhichSlit(obj["slit"])
    raise ValueError(f"unknown record kind {obj['kind']!r}")


@dataclass(frozen=True)
class TrialRecord:
    index: int
    emit_time: float
    setting: SlitSetting          # receiver-private
    detected: bool
    alice_record: Position | WhichSlit | None  # committer-private
    announce_time: float

    def __post_init__(self):
        if self.setting is SlitSetting.BOTH_SHUT and self.detected:
            raise ValueError("a blocked particle cannot be detected")

    def public_row(self) -> dict:
        return {"record": "trial", "index": self.index,
                "detected": self.detected, "announce_time": self.announce_time}

    def bob_row(self) -> dict:
        row = self.public_row()
        row["setting"] = self.setting.value
        row["emit_time"] = self.emit_time
        return row

    def alice_row(self) -> dict:
        row = self.public_row()
        rec = self.alice_record
        row["alice_record"] = None if rec is None else rec.to_json()
        return row


@dataclass(frozen=True)
class BobView:
    """What the receiver knows when he checks an unveil message."""

    n_detected: int
    settings: dict[int, SlitSetting]  # by trial index, detected trials only
    commit_end_time: float


class Transcript:
    """Complete record of one commit run."""

    def __init__(self, trials: list[TrialRecord], n_detected: int,
                 commit_end_time: float, header: dict):
        self.trials = list(trials)
        self.n_detected = int(n_detected)
        self.commit_end_time = float(commit_end_time)
        self.header = dict(header)  # config + seed, serialized into every file
        found = sum(1 for t in self.trials if t.detected)
        if found != self.n_detected:
            raise ValueError(f"{found} detected trials != declared {n_detected}")

    @property
    def n_emitted(self) -> int:
        return len(self.trials)

    def detected_trials(self) -> list[TrialRecord]:
        return [t for t in self.trials if t.detected]

    def bob_view(self) -> BobView:
        return BobView(
            n_detected=self.n_detected,
            settings={t.index: t.setting for t in self.trials if t.detected},
            commit_end_time=self.commit_end_time,
        )

    def _file_header(self, projection: str) -> dict:
        head = {"record": "header", "projection": projection,
                "n_detected": self.n_detected,
                "n_emitted": self.n_emitted,
                "commit_end_time": self.commit_end_time}
        head.update(self.header)
        return head

    def public_rows(self) -> tuple[dict, list[dict]]:
        return self._file_header("public"), [t.public_row() for t in self.trials]

    def bob_rows(self) -> tuple[dict, list[dict]]:
        return self._file_header("bob"), [t.bob_row() for t in self.trials]

    def alice_rows(self) -> tuple[dict, list[dict]]:
        return self._file_header("alice"), [t.alice_row() for t in self.trials]


@dataclass(frozen=True)
class UnveilMessage:
    """The committer's disclosure: the bit plus one value per detected trial.

    For bit 0 the values are screen positions; for bit 1 slit labels.
    """

    bit: int
    entries: tuple[tuple[int, float | str], ...]  # (trial index, value)

    def __post_init__(self):
        if self.bit not in (0, 1):
            raise MalformedUnveil(f"bit must be 0 or 1, got {self.bit!r}")

    def rows(self) -> tuple[dict, list[dict]]:
        header = {"record": "unveil", "bit": self.bit, "count": len(self.entries)}
        body = []
        for index, value in self.entries:
            if self.bit == 0:
                body.append({"record": "disclosure", "index": index, "x": value})
            else:
                body.append({"record": "disclosure", "index": index, "slit": value})
        return header, body

    @classmethod
    def from_rows(cls, header: dict, body: Iterable[dict]) -> "UnveilMessage":
        try:
            bit = int(header["bit"])
            entries = []
            for row in body:
                if bit == 0:
                    entries.append((int(row["index"]), float(row["x"])))
                else:
                    entries.append((int(row["index"]), str(row["slit"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedUnveil(f"bad unveil row: {exc}") from exc
        return cls(bit=bit, entries=tuple(entries))


@dataclass(frozen=True)
class TestOutcome:
    name: str
    statistic: float
    p_value: float        # p-value or error rate, depending on the test
    threshold: float
    passed: bool
    skipped: bool = False  # auto-passed for lack of events; warning flag

    def to_json(self) -> dict:
        return {"record": "test", "name": self.name, "statistic": self.statistic,
                "p_value": self.p_value, "threshold": self.threshold,
                "passed": self.passed, "skipped": self.skipped}


@dataclass(frozen=True)
class VerificationReport:
    accepted: bool
    tests: tuple[TestOutcome, ...]

    def __post_init__(self):
        if self.accepted != all(t.passed for t in self.tests):
            raise ValueError("accepted flag inconsistent with test outcomes")

    def rows(self) -> tuple[dict, list[dict]]:
        header = {"record": "report", "accepted": self.accepted,
                  "n_tests": len(self.tests)}
        return header, [t.to_json() for t in self.tests]


def write_jsonl(path, header: dict, rows: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")


def read_jsonl(path) -> tuple[dict, list[dict]]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise MalformedUnveil(f"{path}: empty file")
    try:
        parsed = [json.loads(line) for line in lines]
    except json.JSONDecodeError as exc:
        raise MalformedUnveil(f"{path}: {exc}") from exc
    return parsed[0], parsed[1:]
