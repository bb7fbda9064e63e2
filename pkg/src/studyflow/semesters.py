"""Semester indexing for the German WS/SS academic calendar.

A semester is addressed two ways: a compact non-negative integer index used
for all arithmetic, and a display form like ``WS15`` or ``SS16``. The index
encodes ``2 * (year - epoch) + 1`` for a winter semester and
``2 * (year - epoch)`` for a summer semester, so the successor of a winter
semester is the summer semester of the following calendar year and winter
sorts after summer within the same year.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

DEFAULT_EPOCH = 2000

WINTER = "winter"
SUMMER = "summer"

_DISPLAY_RE = re.compile(r"^(WS|SS)(\d{2})$")


class SemesterParseError(ValueError):
    """Raised when a semester display string cannot be decoded."""


@dataclass(frozen=True, order=True)
class SemesterIndex:
    """One academic semester, identified by its integer index.

    The display form is bijective with the index over the century starting
    at ``epoch`` (two-digit years wrap beyond that).
    """

    index: int
    epoch: int = DEFAULT_EPOCH

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"semester index must be non-negative, got {self.index}")

    @classmethod
    def from_parts(cls, season: str, year: int, epoch: int = DEFAULT_EPOCH) -> "SemesterIndex":
        if season not in (WINTER, SUMMER):
            raise ValueError(f"season must be {WINTER!r} or {SUMMER!r}, got {season!r}")
        if not epoch <= year < epoch + 100:
            # Display strings carry two-digit years, so one epoch covers a century.
            raise ValueError(f"year {year} outside [{epoch}, {epoch + 99}]")
        return cls(2 * (year - epoch) + (1 if season == WINTER else 0), epoch)

    @classmethod
    def parse(cls, text: str, epoch: int = DEFAULT_EPOCH) -> "SemesterIndex":
        """Decode a ``WS<yy>`` / ``SS<yy>`` display string."""
        m = _DISPLAY_RE.match(text.strip())
        if m is None:
            raise SemesterParseError(f"not a semester like 'WS15' or 'SS16': {text!r}")
        yy = int(m.group(2))
        year = epoch + ((yy - epoch % 100) % 100)
        return cls.from_parts(WINTER if m.group(1) == "WS" else SUMMER, year, epoch)

    @property
    def is_winter(self) -> bool:
        return self.index % 2 == 1

    @property
    def season(self) -> str:
        return WINTER if self.is_winter else SUMMER

    @property
    def year(self) -> int:
        return self.epoch + self.index // 2

    @property
    def display(self) -> str:
        return f"{'WS' if self.is_winter else 'SS'}{self.year % 100:02d}"

    def __add__(self, semesters: int) -> "SemesterIndex":
        return SemesterIndex(self.index + semesters, self.epoch)

    def __sub__(self, other):
        if isinstance(other, SemesterIndex):
            return self.index - other.index
        return SemesterIndex(self.index - other, self.epoch)

    def __str__(self) -> str:
        return self.display
