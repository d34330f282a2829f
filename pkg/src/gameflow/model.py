"""Linear dominance regression and the team/player score indices.

The end-of-game score value of game k is regressed on the standardized
final stats:

    y_k = alpha_0 + sum_i alpha_i * S_i^k(1) + eps_k,   eps_k ~ (0, sigma^2)

alpha_0 is the team's pre-game strength (TFS), the fitted linear form at
the finals is the game's statistical score (TSS), and the same form on a
player's stats gives the player's statistical score (PSS).  PCS
redistributes alpha_0 across the roster by each player's deviation from
the roster-average PSS.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

import numpy as np
import scipy.linalg
from scipy.special import betainc

from .errors import EmptyRoster, RankDeficient, TooFewGames
from .standardize import Standardizer, fit_standardizer, standardize_final
from .tscore import ScorePair, TScoreVariant, t_score

if TYPE_CHECKING:
    from .data import GameRecord

RANK_TOL = 1e-10


@dataclass(frozen=True)
class CoefficientInference:
    std_error: float
    t_value: float
    p_value: float


@dataclass(frozen=True)
class FittedModel:
    team_id: str
    variant: TScoreVariant
    alpha0: float
    alpha: tuple[float, ...]
    sigma2: float
    tau2: float
    scaler: Standardizer
    inference: tuple[CoefficientInference, ...]  # alpha0 first, then alpha_i
    n_games: int
    stat_ids: tuple[str, ...]

    def __post_init__(self):
        if len(self.alpha) != len(self.stat_ids):
            raise ValueError("alpha and stat_ids must have equal length")
        tau2 = sum(a * a for a in self.alpha)
        scale = max(abs(tau2), abs(self.tau2), 1.0)
        if abs(tau2 - self.tau2) > 1e-12 * scale:
            raise ValueError(
                f"tau2={self.tau2!r} inconsistent with coefficients ({tau2!r})"
            )
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be non-negative")
        if self.n_games <= len(self.alpha) + 1:
            raise ValueError("need n_games > d + 1")

    @property
    def d(self) -> int:
        return len(self.alpha)

    @property
    def total_variance(self) -> float:
        """tau^2 + sigma^2, the per-unit-time predictive variance."""
        return self.tau2 + self.sigma2


@dataclass
class PlayerGameEval:
    player_id: str
    pss: float = 0.0
    pcs: float = 0.0
    x_index: float = 0.0
    stats_x: float = 0.0
    minutes_fraction: float = 0.0


def _student_t_p_value(t: float, df: int) -> float:
    """Two-sided p-value via the regularized incomplete beta function."""
    if df <= 0:
        return float("nan")
    x = df / (df + t * t)
    return float(betainc(df / 2.0, 0.5, x))


def fit(games: Sequence["GameRecord"], variant: TScoreVariant,
        stat_ids: Sequence[str], team_id: str = "team") -> FittedModel:
    """Ordinary least squares fit of the dominance regression.

    The standardizer is estimated from these games' finals and persisted
    with the model so later replays reuse training-time scalers.
    """
    stat_ids = tuple(stat_ids)
    n, d = len(games), len(stat_ids)
    if n < d + 2:
        raise TooFewGames(f"need at least {d + 2} games for d={d}, got {n}")

    finals = {sid: [g.team_final(sid) for g in games] for sid in stat_ids}
    standardizer = fit_standardizer(finals)

    x = np.ones((n, d + 1))
    for j, sid in enumerate(stat_ids):
        for k, g in enumerate(games):
            x[k, j + 1] = standardize_final(finals[sid][k], standardizer, sid)
    y = np.array([t_score(variant, ScorePair(*g.final)) for g in games])

    # rank-revealing check before solving; tolerance relative to the
    # largest column norm
    _, r_fact, piv = scipy.linalg.qr(x, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r_fact))
    tol = RANK_TOL * diag.max()
    rank = int((diag > tol).sum())
    if rank < d + 1:
        names = ("intercept",) + stat_ids
        bad = sorted(names[piv[i]] for i in range(rank, d + 1))
        raise RankDeficient(bad)

    beta, _, _, _ = np.linalg.lstsq(x, y, rcond=None)
    resid = y - x @ beta
    dof = n - d - 1
    sigma2 = float(resid @ resid) / dof
    xtx_inv = np.linalg.inv(x.T @ x)
    std_err = np.sqrt(sigma2 * np.diag(xtx_inv))

    inference = []
    for j in range(d + 1):
        se = float(std_err[j])
        tv = float(beta[j]) / se if se > 0 else float("inf")
        inference.append(CoefficientInference(se, tv, _student_t_p_value(tv, dof)))

    alpha = tuple(float(b) for b in beta[1:])
    return FittedModel(
        team_id=team_id,
        variant=variant,
        alpha0=float(beta[0]),
        alpha=alpha,
        sigma2=sigma2,
        tau2=sum(a * a for a in alpha),
        scaler=standardizer,
        inference=tuple(inference),
        n_games=n,
        stat_ids=stat_ids,
    )


def team_scores(model: FittedModel, game: "GameRecord") -> dict[str, float]:
    """TFS, TSS and their sum for one game.

    TFS is the pre-game intercept and does not depend on the game; TSS is
    the fitted linear form at the game's standardized finals.
    """
    tss = 0.0
    for a_i, sid in zip(model.alpha, model.stat_ids):
        tss += a_i * standardize_final(game.team_final(sid), model.scaler, sid)
    return {"tfs": model.alpha0, "tss": tss, "predicted_t": model.alpha0 + tss}


def pcs_from_pss(alpha0: float, pss: Sequence[float]) -> list[float]:
    """Redistribute alpha0 over the roster by PSS deviation from the mean.

    Each player gets the equal share alpha0/J plus alpha0 times the
    player's signed share of the total absolute deviation D.  When every
    PSS is equal (D = 0) the deviation term vanishes.  The results always
    sum to alpha0.
    """
    j = len(pss)
    if j == 0:
        raise EmptyRoster("no players appeared")
    mean = sum(pss) / j
    d_k = sum(abs(p - mean) for p in pss)
    if d_k == 0.0:
        return [alpha0 / j] * j
    return [alpha0 / j + alpha0 * (p - mean) / d_k for p in pss]


def player_scores(model: FittedModel, game: "GameRecord") -> list[PlayerGameEval]:
    """Per-player PSS and PCS for one game.

    Player finals are standardized against a 1/J share of the team drift,
    so the player PSS values sum exactly to the team TSS.
    """
    players = game.player_ids()
    j = len(players)
    if j == 0:
        raise EmptyRoster(f"game {game.game_id}: no players appeared")
    evals = []
    for pid in players:
        pss = 0.0
        for a_i, sid in zip(model.alpha, model.stat_ids):
            pss += a_i * standardize_final(
                game.player_final(pid, sid), model.scaler, sid, share=1.0 / j
            )
        evals.append(PlayerGameEval(player_id=pid, pss=pss,
                                    minutes_fraction=game.minutes_fraction(pid)))
    for ev, pcs in zip(evals, pcs_from_pss(model.alpha0, [e.pss for e in evals])):
        ev.pcs = pcs
    return evals
