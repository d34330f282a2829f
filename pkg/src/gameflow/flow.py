"""Dominance-burst intervals, threshold selection, and flow-credit indices.

A grid step qualifies as "on fire" when the dominance path rises by
strictly more than a per-step threshold theta.  A player's X-index is the
overlap of their on-court time with those steps; a transform h of the
X-index provides the flow credit added to PCS in the season aggregate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_DOWN, Decimal
from typing import Callable, Literal, Sequence

from .data import OnCourtSpan
from .errors import InvalidTransform, TooFewRises
from .model import PlayerGameEval
from .process import ProcessPath


@dataclass(frozen=True)
class IofResult:
    """Steps whose per-step rise strictly exceeds the threshold."""

    threshold_theta: float
    intervals: tuple[tuple[float, float], ...]  # half-open [t_r, t_{r+1})
    total_length: float
    increment_sum: float

    def contains(self, t: float) -> bool:
        return any(lo <= t < hi for lo, hi in self.intervals)


def _truncate_3sig(x: float) -> float:
    """Truncate a positive value toward zero to 3 significant digits."""
    d = Decimal(repr(float(x)))
    exp = d.adjusted()
    q = d.scaleb(-exp + 2).to_integral_value(rounding=ROUND_DOWN).scaleb(exp - 2)
    return float(q)


def _next_lower_3sig(x: float) -> float:
    """The largest 3-significant-digit value strictly below x (x > 0,
    already a 3-significant-digit value)."""
    d = Decimal(repr(float(x)))
    exp = d.adjusted()
    mant = int(d.scaleb(-exp + 2).to_integral_value(rounding=ROUND_DOWN))
    if mant <= 100:
        return float(Decimal(999).scaleb(exp - 3))
    return float(Decimal(mant - 1).scaleb(exp - 2))


def select_delta(path: ProcessPath, k_target: int = 4) -> float:
    """Per-step threshold from the k-th largest rise of the path.

    The k-th largest positive increment is truncated toward zero to 3
    significant digits so the top k steps pass the strict ``>`` test.  If
    the truncated value still ties out some of the top k (the increment
    itself has only 3 significant digits), the threshold drops to the
    next lower representable value.
    """
    if k_target < 1:
        raise ValueError("k_target must be positive")
    rises = sorted((d for d in path.increments() if d > 0), reverse=True)
    if len(rises) < k_target:
        raise TooFewRises(
            f"path has {len(rises)} positive increments, need {k_target}")
    theta = _truncate_3sig(rises[k_target - 1])
    while sum(1 for d in rises if d > theta) < k_target:
        theta = _next_lower_3sig(theta)
    return theta


def iof(path: ProcessPath, theta: float) -> IofResult:
    """All grid steps with per-step rise strictly above theta."""
    delta = 1.0 / path.grid_r
    intervals = []
    inc_sum = 0.0
    for r, d in enumerate(path.increments()):
        if d > theta:
            intervals.append((path.times[r], path.times[r + 1]))
            inc_sum += d
    return IofResult(
        threshold_theta=theta,
        intervals=tuple(intervals),
        total_length=len(intervals) * delta,
        increment_sum=inc_sum,
    )


def _overlap(span: OnCourtSpan, interval: tuple[float, float]) -> list[tuple[float, float]]:
    lo, hi = interval
    out = []
    for a, b in span.intervals:
        u, v = max(a, lo), min(b, hi)
        if u < v:
            out.append((u, v))
    return out


def x_index(span: OnCourtSpan, result: IofResult,
            weight: Literal[None, "endgame"] = None) -> float:
    """Overlap of the player's on-court time with the on-fire steps.

    With ``weight="endgame"`` each overlap piece [u, v) is measured under
    w(t) = 1 / sqrt(1 - t), integrated in closed form as
    2 (sqrt(1 - u) - sqrt(1 - v)), emphasizing late-game involvement.
    """
    total = 0.0
    for interval in result.intervals:
        for u, v in _overlap(span, interval):
            if weight == "endgame":
                total += 2.0 * (math.sqrt(1.0 - u) - math.sqrt(1.0 - v))
            else:
                total += v - u
    return total


StatsXTransform = Callable[[float], float]

_H_GRID = 1001  # 1e-3 grid on [0, 1]
_H_JUMP_TOL = 0.1


def validate_transform(h: StatsXTransform) -> None:
    """Check the flow-credit transform on a 1e-3 grid.

    Required: h(0) = 0, monotone non-decreasing, finite (bounded), and no
    jump larger than 0.1 between adjacent grid points as a practical
    continuity proxy.
    """
    xs = [i / (_H_GRID - 1) for i in range(_H_GRID)]
    ys = [h(x) for x in xs]
    if ys[0] != 0.0:
        raise InvalidTransform(f"h(0) = {ys[0]!r}, expected 0")
    for i, y in enumerate(ys):
        if not math.isfinite(y):
            raise InvalidTransform(f"h({xs[i]}) is not finite")
    for i in range(1, _H_GRID):
        if ys[i] < ys[i - 1]:
            raise InvalidTransform(
                f"h decreases between {xs[i - 1]} and {xs[i]}")
        if ys[i] - ys[i - 1] > _H_JUMP_TOL:
            raise InvalidTransform(
                f"h jumps by {ys[i] - ys[i - 1]:.4g} between {xs[i - 1]} "
                f"and {xs[i]}")


@dataclass(frozen=True)
class GameEvaluation:
    """Per-game evaluation output: the threshold used and player rows."""

    game_id: str
    theta: float
    players: tuple[PlayerGameEval, ...]


def player_totals(
    games: Sequence[GameEvaluation],
    h: StatsXTransform | None = None,
    denominator: Literal["all_games", "appearances"] = "all_games",
) -> dict[str, float]:
    """Season aggregate: mean over games of (PCS + h(X-index)).

    With ``h=None`` each game uses its own linear credit theta_k * x, a
    lower bound for the path rise over the player's on-fire minutes.
    With ``denominator="all_games"`` a game the player sat out contributes
    0 to the sum but still counts in the mean.
    """
    if h is not None:
        validate_transform(h)
    sums: dict[str, float] = {}
    appearances: dict[str, int] = {}
    for game in games:
        for ev in game.players:
            credit = h(ev.x_index) if h is not None else game.theta * ev.x_index
            sums[ev.player_id] = sums.get(ev.player_id, 0.0) + ev.pcs + credit
            appearances[ev.player_id] = appearances.get(ev.player_id, 0) + 1
    n_all = len(games)
    totals = {}
    for pid, total in sums.items():
        n = n_all if denominator == "all_games" else appearances[pid]
        totals[pid] = total / n if n else 0.0
    return totals


def stopping_times(path: ProcessPath, theta: float,
                   epsilon: float) -> dict[str, float | None]:
    """First sharp reversal and first win-probability drop.

    reversal_time: start of the first grid step whose rise is <= -theta.
    pw_drop_time: first grid time whose win probability is <= epsilon.
    Either is None when no step qualifies.
    """
    reversal = None
    for r, d in enumerate(path.increments()):
        if d <= -theta:
            reversal = path.times[r]
            break
    drop = None
    for r, p in enumerate(path.pw):
        if p <= epsilon:
            drop = path.times[r]
            break
    return {"reversal_time": reversal, "pw_drop_time": drop}
