"""Machine-independent work accounting and phase statistics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum


class Cause(str, Enum):
    """Why a phase ended."""

    TH = "TH"  # an update landed inside the frozen sample
    TI = "TI"  # too many I->L moves / sample-incident updates
    TL = "TL"  # degree cap on the low graph exceeded
    TEXP = "TEXP"  # phase ran its full length
    PARENT = "PARENT"  # enclosing level phase restarted
    EPOCH = "EPOCH"  # edge count left the epoch's factor-2 window

    @property
    def successful(self) -> bool:
        return self in (Cause.TEXP, Cause.PARENT, Cause.EPOCH)


@dataclass
class WorkMeter:
    work_units: int = 0
    wall_ns: int = 0
    phases_by_cause: Counter = field(default_factory=Counter)
    # per-level end causes for the nested algorithm (index 0 is level 1)
    level_causes: list[Counter] = field(default_factory=list)
    phase_lengths: list[int] = field(default_factory=list)
    max_delta_l: int = 0
    verify_failures: int = 0
    updates: int = 0

    @property
    def phases_total(self) -> int:
        return sum(self.phases_by_cause.values())

    def end_phase(self, cause: Cause, length: int) -> None:
        self.phases_by_cause[cause] += 1
        self.phase_lengths.append(length)

    def ensure_levels(self, levels: int) -> None:
        while len(self.level_causes) < levels:
            self.level_causes.append(Counter())

    def end_level_phase(self, level: int, cause: Cause) -> None:
        """Record the end of a phase at ``level`` (1-based)."""
        self.ensure_levels(level)
        self.level_causes[level - 1][cause] += 1
        self.phases_by_cause[cause] += 1

    def level_phases(self, level: int) -> int:
        """Completed phases at ``level`` (1-based)."""
        if level > len(self.level_causes):
            return 0
        return sum(self.level_causes[level - 1].values())

    def success_fraction(self, level: int | None = None) -> tuple[int, int]:
        """(successful, completed) phase counts, overall or for one level."""
        causes = self.phases_by_cause if level is None else self.level_causes[level - 1]
        done = sum(causes.values())
        ok = sum(c for cause, c in causes.items() if cause.successful)
        return ok, done

    def note_degree(self, d: int) -> None:
        if d > self.max_delta_l:
            self.max_delta_l = d
