"""2x2 tables and the three-stratum layout used by the indicator method."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

Kind = Literal["counts", "expected-proportions"]


@dataclass(frozen=True)
class TwoByTwo:
    """Outcome-by-exposure table.

    ``a`` = (Y=1, E=1), ``b`` = (Y=1, E=0), ``c`` = (Y=0, E=1),
    ``d`` = (Y=0, E=0).  Entries may be counts or probabilities.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in "abcd":
            if getattr(self, name) < 0:
                raise ValueError(f"cell {name} is negative: {getattr(self, name)!r}")

    @property
    def total(self) -> float:
        return self.a + self.b + self.c + self.d

    def __add__(self, other: "TwoByTwo") -> "TwoByTwo":
        return TwoByTwo(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def scaled(self, k: float) -> "TwoByTwo":
        return TwoByTwo(self.a * k, self.b * k, self.c * k, self.d * k)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=float)

    @classmethod
    def from_cells(cls, cells) -> "TwoByTwo":
        """From an array indexed ``[e, y]``."""
        return cls(a=cells[1][1], b=cells[0][1], c=cells[1][0], d=cells[0][0])


@dataclass(frozen=True)
class StratifiedTables:
    """The C=1, C=0 and C-missing strata side by side."""

    c1: TwoByTwo
    c0: TwoByTwo
    miss: TwoByTwo
    kind: Kind = "counts"

    @property
    def total(self) -> float:
        return self.c1.total + self.c0.total + self.miss.total

    @property
    def complete_total(self) -> float:
        return self.c1.total + self.c0.total

    def strata(self) -> tuple[TwoByTwo, TwoByTwo, TwoByTwo]:
        return self.c1, self.c0, self.miss

    def scaled(self, k: float) -> "StratifiedTables":
        return StratifiedTables(self.c1.scaled(k), self.c0.scaled(k), self.miss.scaled(k), self.kind)
