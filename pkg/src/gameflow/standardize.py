"""Drift-removing standardization of cumulative stat paths.

A raw cumulative path S~(t) is rescaled to (S~(t) - m*t) / v where m and v
are the mean and standard deviation of the *final* value S~(1) across
training games.  Unlike the pointwise z-score, the denominator carries no
sqrt(t), so the rescaled path has variance growing linearly in t, like a
Brownian motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import DegenerateStat, MissingScaler


@dataclass(frozen=True)
class StatPath:
    """A stat sampled on an even grid t_0=0 < ... < t_R=1.

    ``values[r]`` is the level at t_r = r/R.  Raw paths are non-decreasing
    and start at 0; standardized paths start at 0 but may decrease.
    """

    stat_id: str
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) < 2:
            raise ValueError(f"{self.stat_id}: need at least 2 grid points")

    @property
    def grid_r(self) -> int:
        return len(self.values) - 1

    def times(self) -> list[float]:
        r = self.grid_r
        return [i / r for i in range(r + 1)]


@dataclass(frozen=True)
class Scaler:
    m: float
    v: float


@dataclass(frozen=True)
class Standardizer:
    """Per-stat (m, v) scalers estimated from training-game finals."""

    scalers: Mapping[str, Scaler] = field(default_factory=dict)

    def scaler_for(self, stat_id: str) -> Scaler:
        try:
            return self.scalers[stat_id]
        except KeyError:
            raise MissingScaler(f"no scaler for stat {stat_id!r}")

    @property
    def stat_ids(self) -> list[str]:
        return list(self.scalers)


def fit_standardizer(finals: Mapping[str, Sequence[float]]) -> Standardizer:
    """Estimate (m, v) per stat from the final cumulative values of the
    training games.

    m is the sample mean and v the sample standard deviation (n-1
    denominator).  Raises DegenerateStat when all finals of a stat are
    identical, since no scale can be defined; the caller must drop or
    merge that stat.
    """
    scalers = {}
    for stat_id, xs in finals.items():
        xs = list(xs)
        n = len(xs)
        if n < 2:
            raise DegenerateStat(f"{stat_id}: need >= 2 games, got {n}")
        m = sum(xs) / n
        ss = sum((x - m) ** 2 for x in xs)
        if ss == 0.0:
            raise DegenerateStat(f"{stat_id}: all {n} finals equal {xs[0]}")
        scalers[stat_id] = Scaler(m=m, v=math.sqrt(ss / (n - 1)))
    return Standardizer(scalers)


def standardize_path(raw: StatPath, standardizer: Standardizer,
                     share: float = 1.0) -> StatPath:
    """Apply (S~(t) - share*m*t) / v pointwise.

    ``share`` < 1 standardizes a player-level path against its per-player
    slice of the team drift (m/J for a J-player roster), so that player
    paths sum exactly to the team path after standardization.
    """
    sc = standardizer.scaler_for(raw.stat_id)
    r = raw.grid_r
    values = tuple(
        (raw.values[i] - share * sc.m * (i / r)) / sc.v for i in range(r + 1)
    )
    return StatPath(stat_id=raw.stat_id, values=values)


def standardize_final(final: float, standardizer: Standardizer, stat_id: str,
                      share: float = 1.0) -> float:
    """z-score of a final cumulative value (the t=1 point of the path)."""
    sc = standardizer.scaler_for(stat_id)
    return (final - share * sc.m) / sc.v
