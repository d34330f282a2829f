"""Game replay: dominance path, score blend, and closed-form win probability.

The in-game dominance level starts at T(alpha0, beta0) and moves with the
fitted linear form of the diffusion-standardized stat paths.  The win
probability at time t is the Gaussian tail probability that the blend

    T_*(t) = (1 - t) * T(alpha0, beta0) + t * T(a(t), b(t))

plus a remaining-time fluctuation of variance (1 - t) * (tau^2 + sigma^2)
ends above the draw benchmark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .data import GameRecord
from .errors import DegenerateModel, GridMismatch
from .model import FittedModel
from .standardize import standardize_path
from .tscore import ScorePair, TScoreVariant, draw_benchmark, t_score


def normal_cdf(x: float) -> float:
    """Standard normal CDF; branched on sign so both tails keep full
    relative precision."""
    if x >= 0.0:
        return 1.0 - 0.5 * math.erfc(x / math.sqrt(2.0))
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_pdf(x: float) -> float:
    """Standard normal density."""
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class MatchContext:
    """One game's replay configuration: our model against one opponent."""

    model: FittedModel
    opponent_tfs: float
    grid_r: int = 40

    def __post_init__(self):
        if self.grid_r < 2:
            raise ValueError("grid_r must be >= 2")

    @property
    def variant(self) -> TScoreVariant:
        return self.model.variant

    def initial_level(self) -> float:
        """T(alpha0, beta0), the pre-game dominance level."""
        return t_score(self.variant, ScorePair(self.model.alpha0, self.opponent_tfs))


@dataclass
class ProcessPath:
    """Replay output on the grid t_r = r / R."""

    times: list[float]
    mt: list[float]
    pw: list[float] = field(default_factory=list)
    score_a: list[float] = field(default_factory=list)
    score_b: list[float] = field(default_factory=list)

    @property
    def grid_r(self) -> int:
        return len(self.times) - 1

    def increments(self) -> list[float]:
        return [self.mt[r + 1] - self.mt[r] for r in range(len(self.mt) - 1)]


def mt_path(ctx: MatchContext, game: GameRecord) -> ProcessPath:
    """Dominance path replayed from the game's raw stat paths.

    The unobservable Brownian term is replayed at its conditional point
    value 0; model noise still enters the win probability through
    sigma^2.
    """
    if game.grid_r != ctx.grid_r:
        raise GridMismatch(
            f"game {game.game_id} has grid {game.grid_r}, context wants {ctx.grid_r}")
    base = ctx.initial_level()
    r = ctx.grid_r
    mt = [base] * (r + 1)
    for a_i, sid in zip(ctx.model.alpha, ctx.model.stat_ids):
        std = standardize_path(game.team_path(sid), ctx.model.scaler)
        for i in range(r + 1):
            mt[i] += a_i * std.values[i]
    return ProcessPath(times=[i / r for i in range(r + 1)], mt=mt)


def t_star(ctx: MatchContext, t: float, s: ScorePair) -> float:
    """Time-weighted blend of the pre-game level and the realized score."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must be in [0, 1], got {t}")
    if t == 0.0:
        return ctx.initial_level()
    return (1.0 - t) * ctx.initial_level() + t * t_score(ctx.variant, s)


def _pw_from_t_star(ctx: MatchContext, t: float, tstar: float) -> float:
    c = draw_benchmark(ctx.variant)
    total_var = ctx.model.total_variance
    if total_var <= 0.0:
        raise DegenerateModel("tau^2 + sigma^2 = 0 with t < 1")
    # the mirrored form keeps full precision in both tails
    return normal_cdf((tstar - c) / math.sqrt((1.0 - t) * total_var))


def win_probability(ctx: MatchContext, t: float, s: ScorePair) -> float:
    """Closed-form win probability at time t given the current score.

    At t = 1 the limit applies: 1 if the final score value is above the
    draw benchmark, 0 if below, 0.5 on a tie.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must be in [0, 1], got {t}")
    if t == 1.0:
        c = draw_benchmark(ctx.variant)
        final = t_score(ctx.variant, s)
        if final > c:
            return 1.0
        if final < c:
            return 0.0
        return 0.5
    return _pw_from_t_star(ctx, t, t_star(ctx, t, s))


def pw_sensitivity(ctx: MatchContext, t: float, s: ScorePair) -> list[float]:
    """Gradient of the win probability in the standardized stats.

    Component i carries the sign of alpha_i; all components share the
    density factor at the current standardized margin.
    """
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t must be in [0, 1), got {t}")
    c = draw_benchmark(ctx.variant)
    total_var = ctx.model.total_variance
    if total_var <= 0.0:
        raise DegenerateModel("tau^2 + sigma^2 = 0 with t < 1")
    scale = math.sqrt((1.0 - t) * total_var)
    dens = normal_pdf((c - t_star(ctx, t, s)) / scale)
    return [dens * a_i / scale for a_i in ctx.model.alpha]


def replay(ctx: MatchContext, game: GameRecord) -> ProcessPath:
    """Full replay: dominance path, score paths and win probability."""
    path = mt_path(ctx, game)
    sf, sa = game.score_paths()
    path.score_a = list(sf.values)
    path.score_b = list(sa.values)
    path.pw = [
        win_probability(ctx, path.times[r], ScorePair(path.score_a[r], path.score_b[r]))
        for r in range(ctx.grid_r + 1)
    ]
    return path
