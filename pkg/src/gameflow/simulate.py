"""Synthetic game generation and Monte Carlo oracles.

Scoring-event counts are compound Poisson: a Poisson number of events per
game, each worth 1, 2 or 3 points.  The league generator draws
standardized final stats, forms the dominance value for each game, and
inverts it back to an integer score line.  ``monte_carlo_pw`` samples the
predictive Gaussian increments directly and is the independent oracle for
the closed-form win probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import (SCORE_AGAINST, SCORE_FOR, STANDARD_STATS, GameRecord,
                   OnCourtSpan)
from .model import FittedModel
from .process import MatchContext, t_star
from .standardize import StatPath
from .tscore import Kind, ScorePair, draw_benchmark, t_score


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Seeded PCG64 generator; (seed, stream indices) fully determine the
    output on every platform."""
    return np.random.default_rng(np.random.SeedSequence([seed, *stream]))


@dataclass(frozen=True)
class ScoringLaw:
    """Event intensity and the 1/2/3-point mark distribution."""

    intensity: float
    point_dist: tuple[float, float, float] = (0.2, 0.6, 0.2)

    def __post_init__(self):
        if self.intensity <= 0:
            raise ValueError("intensity must be positive")
        if any(w < 0 for w in self.point_dist):
            raise ValueError("point weights must be non-negative")
        if abs(sum(self.point_dist) - 1.0) > 1e-12:
            raise ValueError("point weights must sum to 1")

    @property
    def mark_mean(self) -> float:
        return sum(w * p for w, p in zip(self.point_dist, (1, 2, 3)))

    @property
    def mark_var(self) -> float:
        m = self.mark_mean
        return sum(w * (p - m) ** 2 for w, p in zip(self.point_dist, (1, 2, 3)))

    def final_mean(self) -> float:
        return self.intensity * self.mark_mean

    def final_var(self) -> float:
        # compound Poisson: lambda * E[X^2]
        return self.intensity * (self.mark_var + self.mark_mean ** 2)


def simulate_stat_path(law: ScoringLaw, rng: np.random.Generator,
                       grid_r: int) -> StatPath:
    """One raw cumulative path sampled on the grid.

    Event times are uniform order statistics conditional on a Poisson
    event count, which is exact for a Poisson process at any intensity.
    """
    n = int(rng.poisson(law.intensity))
    values = np.zeros(grid_r + 1)
    if n > 0:
        times = rng.uniform(0.0, 1.0, size=n)
        marks = rng.choice((1.0, 2.0, 3.0), size=n, p=law.point_dist)
        # events in (t_{r-1}, t_r] accumulate into grid point r onward
        bins = np.minimum(np.ceil(times * grid_r).astype(int), grid_r)
        per_step = np.zeros(grid_r + 1)
        np.add.at(per_step, bins, marks)
        values = np.cumsum(per_step)
    return StatPath("sim", tuple(float(v) for v in values))


@dataclass(frozen=True)
class LeagueTruth:
    """Generator parameters for one synthetic team."""

    alpha0: float
    alpha: tuple[float, ...]
    sigma: float
    stat_ids: tuple[str, ...] = STANDARD_STATS
    stat_laws: tuple[ScoringLaw, ...] = ()

    def laws(self) -> tuple[ScoringLaw, ...]:
        if self.stat_laws:
            return self.stat_laws
        return tuple(ScoringLaw(30.0 + 10.0 * i, (0.2, 0.6, 0.2))
                     for i in range(len(self.stat_ids)))


def _invert_symratio(target: float, total: float) -> tuple[int, int]:
    """Integer score pair with roughly the symmetric-ratio value
    ``target`` and total points ``total``."""
    if target >= 1.0:
        a = total / (3.0 - target)
        b = total - a
    else:
        b = total / (1.0 + target)
        a = total - b
    a_i, b_i = max(round(a), 0), max(round(b), 0)
    # keep the win/loss side consistent after rounding
    if target > 1.0 and a_i <= b_i:
        a_i = b_i + 1
    elif target < 1.0 and b_i <= a_i:
        b_i = a_i + 1
    elif target == 1.0:
        b_i = a_i
    return a_i, b_i


def _invert_score_exact(variant, target: float, total: float) -> tuple[float, float]:
    if variant.kind is Kind.SYMMETRIC_RATIO:
        if target >= 1.0:
            a = total / (3.0 - target)
            return a, total - a
        b = total / (1.0 + target)
        return total - b, b
    if variant.kind is Kind.DIFFERENCE:
        a = (total + target) / 2.0
        return a, total - a
    raise ValueError(f"score inversion not supported for {variant.kind}")


def _invert_score(variant, target: float, total: float) -> tuple[int, int]:
    if variant.kind is Kind.SYMMETRIC_RATIO:
        return _invert_symratio(target, total)
    if variant.kind is Kind.DIFFERENCE:
        a = (total + target) / 2.0
        return round(a), round(total - a)
    raise ValueError(f"score inversion not supported for {variant.kind}")


def simulate_league(truth: LeagueTruth, model_shape: FittedModel | None,
                    n_games: int, rng: np.random.Generator,
                    grid_r: int = 8, n_players: int = 5,
                    opponent_ids: Sequence[str] = ("opp",),
                    team_id: str = "team",
                    round_scores: bool = True) -> list[GameRecord]:
    """Games whose final dominance values follow the linear model exactly.

    Stat paths are compound Poisson; the standardized final of stat i
    (against the law's own mean and standard deviation) enters the linear
    form with coefficient alpha_i, noise is added, and the resulting
    value is inverted to an integer score line.  Player paths are fixed
    shares of the team path, so player stats sum to team stats by
    construction.

    ``model_shape`` optionally supplies the score variant; the default is
    the symmetric ratio.
    """
    from .tscore import TScoreVariant

    variant = model_shape.variant if model_shape else TScoreVariant(Kind.SYMMETRIC_RATIO)
    laws = truth.laws()
    d = len(truth.stat_ids)
    shares = np.arange(1, n_players + 1, dtype=float)
    shares /= shares.sum()

    games = []
    for k in range(n_games):
        team_paths = {}
        z = np.empty(d)
        for i, (sid, law) in enumerate(zip(truth.stat_ids, laws)):
            path = simulate_stat_path(law, rng, grid_r)
            team_paths[sid] = StatPath(sid, path.values)
            z[i] = (path.values[-1] - law.final_mean()) / math.sqrt(law.final_var())
        target = truth.alpha0 + float(np.dot(truth.alpha, z))
        target += truth.sigma * float(rng.standard_normal())
        total = 150 + int(rng.integers(0, 60))
        if round_scores:
            a, b = _invert_score(variant, target, total)
            sf = tuple(float(round(a * r / grid_r)) for r in range(grid_r + 1))
            sa = tuple(float(round(b * r / grid_r)) for r in range(grid_r + 1))
        else:
            # exact real-valued scores: the final dominance value equals
            # the target bit-for-bit up to the variant arithmetic
            a, b = _invert_score_exact(variant, target, total)
            sf = tuple(a * r / grid_r for r in range(grid_r + 1))
            sa = tuple(b * r / grid_r for r in range(grid_r + 1))
        team_paths[SCORE_FOR] = StatPath(SCORE_FOR, sf)
        team_paths[SCORE_AGAINST] = StatPath(SCORE_AGAINST, sa)

        player_paths = {}
        for j in range(n_players):
            pid = f"p{j + 1}"
            paths = {}
            for sid in truth.stat_ids:
                team_vals = team_paths[sid].values
                if j < n_players - 1:
                    vals = tuple(shares[j] * v for v in team_vals)
                else:
                    vals = tuple(
                        v - sum(shares[i] * v for i in range(n_players - 1))
                        for v in team_vals
                    )
                paths[sid] = StatPath(sid, vals)
            player_paths[pid] = paths
        oncourt = {f"p{j + 1}": OnCourtSpan(f"p{j + 1}", ((0.0, 1.0),))
                   for j in range(n_players)}

        games.append(GameRecord(
            game_id=f"g{k + 1:04d}",
            team_id=team_id,
            opponent_id=opponent_ids[k % len(opponent_ids)],
            grid_r=grid_r,
            team_paths=team_paths,
            player_paths=player_paths,
            oncourt=oncourt,
            final=(float(sf[-1]), float(sa[-1])),
        ))
    return games


def monte_carlo_pw(ctx: MatchContext, t: float, s: ScorePair, n_paths: int,
                   rng: np.random.Generator) -> dict[str, float]:
    """Monte Carlo win probability from the predictive Gaussian increments.

    Each path adds d+1 independent N(0, 1-t) increments (one per stat
    plus the noise term, scaled by its coefficient) to the blend value
    and counts terminal values above the draw benchmark.
    """
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t must be in [0, 1), got {t}")
    if n_paths < 1000:
        raise ValueError("n_paths must be >= 1000")
    model = ctx.model
    base = t_star(ctx, t, s)
    c = draw_benchmark(ctx.variant)
    scale = math.sqrt(1.0 - t)
    z = rng.standard_normal(size=(n_paths, model.d + 1))
    coeffs = np.array(list(model.alpha) + [math.sqrt(model.sigma2)])
    terminal = base + scale * (z @ coeffs)
    p_hat = float(np.mean(terminal > c))
    return {
        "estimate": p_hat,
        "std_error": math.sqrt(p_hat * (1.0 - p_hat) / n_paths),
    }
