"""Dominance score functions mapping a score pair to the real line.

Each variant maps (points for, points against) to a value whose position
relative to a fixed draw benchmark ``c`` agrees with the win/draw/loss
ordering: a tie maps to ``c`` exactly, a lead maps above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError


class Kind(str, Enum):
    DIFFERENCE = "diff"
    SYMMETRIC_RATIO = "symratio"
    LOG_RATIO = "logratio"
    RELATIVE_DIFFERENCE = "reldiff"
    NORMALIZED = "normalized"


_DRAW_BENCHMARK = {
    Kind.DIFFERENCE: 0.0,
    Kind.SYMMETRIC_RATIO: 1.0,
    Kind.LOG_RATIO: 0.0,
    Kind.RELATIVE_DIFFERENCE: 0.0,
    Kind.NORMALIZED: 0.0,
}


@dataclass(frozen=True)
class TScoreVariant:
    """A score-function family plus its stabilizer ``kappa``.

    ``kappa`` is used by the log-ratio, relative-difference and normalized
    kinds and ignored by the others.
    """

    kind: Kind
    kappa: float = 0.0

    def __post_init__(self):
        if self.kappa < 0:
            raise DomainError(f"kappa must be non-negative, got {self.kappa}")

    @classmethod
    def from_name(cls, name: str, kappa: float = 0.0) -> "TScoreVariant":
        try:
            return cls(Kind(name), kappa)
        except ValueError:
            valid = ", ".join(k.value for k in Kind)
            raise DomainError(f"unknown variant {name!r}; expected one of: {valid}")


@dataclass(frozen=True)
class ScorePair:
    """Points for (``a``) and against (``b``); both non-negative."""

    a: float
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise DomainError(f"scores must be non-negative, got ({self.a}, {self.b})")

    def swapped(self) -> "ScorePair":
        return ScorePair(self.b, self.a)


def draw_benchmark(variant: TScoreVariant) -> float:
    """The constant value the variant takes on any tied score."""
    return _DRAW_BENCHMARK[variant.kind]


def t_score(variant: TScoreVariant, s: ScorePair) -> float:
    """Evaluate the variant's score function on a score pair.

    Raises DomainError for the log-ratio kind with kappa=0 when either
    score is zero.
    """
    a, b, k = s.a, s.b, variant.kappa
    kind = variant.kind
    if kind is Kind.DIFFERENCE:
        return a - b
    if kind is Kind.SYMMETRIC_RATIO:
        if a == b:
            # includes (0, 0), where the ratio form is 0/0
            return 1.0
        if a > b:
            return 2.0 - b / a
        return a / b
    if kind is Kind.LOG_RATIO:
        if k == 0.0 and (a == 0.0 or b == 0.0):
            raise DomainError("log-ratio with kappa=0 is undefined at zero score")
        return math.log((a + k) / (b + k))
    if kind is Kind.RELATIVE_DIFFERENCE:
        if a == b == 0.0 and k == 0.0:
            return 0.0
        return (a - b) / (a + b + k)
    if kind is Kind.NORMALIZED:
        if a == b == 0.0 and k == 0.0:
            return 0.0
        return (a - b) / math.sqrt(a + b + k)
    raise DomainError(f"unhandled kind {kind}")
