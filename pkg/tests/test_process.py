import math

import pytest
from scipy import stats

from gameflow.errors import DegenerateModel, GridMismatch
from gameflow.model import FittedModel
from gameflow.process import (MatchContext, mt_path, normal_cdf, normal_pdf,
                              pw_sensitivity, replay, t_star, win_probability)
from gameflow.standardize import Scaler, Standardizer
from gameflow.tscore import Kind, ScorePair, TScoreVariant


def _model(alpha=(0.1,), sigma2=0.008, stat_ids=("PTs",)):
    return FittedModel(
        team_id="team", variant=TScoreVariant(Kind.SYMMETRIC_RATIO),
        alpha0=1.14, alpha=alpha, sigma2=sigma2,
        tau2=sum(a * a for a in alpha),
        scaler=Standardizer({sid: Scaler(10.0, 1.0) for sid in stat_ids}),
        inference=(), n_games=60, stat_ids=stat_ids)


def test_normal_cdf_vs_scipy():
    for x in (-8.0, -3.0, -1.0, -0.1, 0.0, 0.5, 2.0, 6.0):
        assert normal_cdf(x) == pytest.approx(stats.norm.cdf(x), rel=1e-12)
        assert normal_pdf(x) == pytest.approx(stats.norm.pdf(x), rel=1e-12)


def test_normal_cdf_symmetry():
    for x in (0.3, 1.7, 4.2):
        # the negative branch reuses the positive tail's erfc directly
        assert normal_cdf(-x) == 0.5 * math.erfc(x / math.sqrt(2.0))
        assert normal_cdf(-x) + normal_cdf(x) == pytest.approx(1.0, abs=1e-15)


def test_initial_level():
    ctx = MatchContext(_model(), opponent_tfs=1.088059)
    # symmetric ratio of the two pre-game strengths
    assert ctx.initial_level() == pytest.approx(2.0 - 1.088059 / 1.14)


def test_t_star_blend():
    ctx = MatchContext(_model(), opponent_tfs=1.0)
    s = ScorePair(50, 40)
    t0 = ctx.initial_level()
    assert t_star(ctx, 0.0, s) == t0
    assert t_star(ctx, 1.0, s) == pytest.approx(2.0 - 40 / 50)
    assert t_star(ctx, 0.25, s) == pytest.approx(0.75 * t0 + 0.25 * (2 - 0.8))


def test_win_probability_oracle():
    ctx = MatchContext(_model(), opponent_tfs=1.0)
    s = ScorePair(50, 40)
    t = 0.5
    ts = t_star(ctx, t, s)
    scale = math.sqrt(0.5 * (0.1 ** 2 + 0.008))
    expected = 1.0 - stats.norm.cdf((1.0 - ts) / scale)
    assert win_probability(ctx, t, s) == pytest.approx(expected, rel=1e-12)


def test_win_probability_endpoint_rule():
    ctx = MatchContext(_model(), opponent_tfs=1.0)
    assert win_probability(ctx, 1.0, ScorePair(94, 66)) == 1.0
    assert win_probability(ctx, 1.0, ScorePair(73, 88)) == 0.0
    assert win_probability(ctx, 1.0, ScorePair(80, 80)) == 0.5


def test_win_probability_half_at_benchmark():
    ctx = MatchContext(_model(), opponent_tfs=1.14)  # even matchup
    assert win_probability(ctx, 0.5, ScorePair(60, 60)) == pytest.approx(0.5)


def test_win_probability_monotone_in_lead():
    ctx = MatchContext(_model(), opponent_tfs=1.0)
    pws = [win_probability(ctx, 0.5, ScorePair(40 + k, 40)) for k in range(10)]
    assert all(x < y for x, y in zip(pws, pws[1:]))


def test_degenerate_model_rejected():
    m = _model(alpha=(0.0,), sigma2=0.0)
    ctx = MatchContext(m, opponent_tfs=1.0)
    with pytest.raises(DegenerateModel):
        win_probability(ctx, 0.5, ScorePair(40, 40))


def test_sensitivity_matches_finite_differences():
    """Central differences on the standardized-stat coordinate."""
    model = _model(alpha=(0.1, -0.03), sigma2=0.006, stat_ids=("PTs", "AS"))
    ctx = MatchContext(model, opponent_tfs=1.05)
    rng_vals = [(0.2, 48, 44), (0.5, 60, 61), (0.8, 70, 64)]
    h = 1e-5
    for t, a, b in rng_vals:
        s = ScorePair(a, b)
        grad = pw_sensitivity(ctx, t, s)
        base_ts = t_star(ctx, t, s)
        scale = math.sqrt((1 - t) * model.total_variance)
        for i, a_i in enumerate(model.alpha):
            up = normal_cdf(((base_ts + a_i * h) - 1.0) / scale)
            dn = normal_cdf(((base_ts - a_i * h) - 1.0) / scale)
            fd = (up - dn) / (2 * h)
            assert grad[i] == pytest.approx(fd, rel=1e-6)


def test_replay_against_reference(ryukyu_path):
    ref_mt = [1.04599493, 1.042735064, 1.046206941]
    for got, want in zip(ryukyu_path.mt[:3], ref_mt):
        assert got == pytest.approx(want, abs=1e-6)
    assert ryukyu_path.pw[0] == pytest.approx(0.633112548, abs=5e-4)
    assert ryukyu_path.pw[-1] == 0.0


def test_grid_mismatch(chiba_model, ryukyu_game):
    ctx = MatchContext(chiba_model, opponent_tfs=1.0, grid_r=48)
    with pytest.raises(GridMismatch):
        mt_path(ctx, ryukyu_game)


def test_replay_time_grid(ryukyu_path):
    assert ryukyu_path.grid_r == 40
    assert ryukyu_path.times[0] == 0.0 and ryukyu_path.times[-1] == 1.0
    assert len(ryukyu_path.increments()) == 40
