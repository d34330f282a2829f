"""Acceptance criteria, one test and one printed pass/fail line each.

Run with ``pytest -v tests/test_acceptance.py`` (add ``-s`` to see the
pass lines for passing tests as well).
"""

import functools
import math
import time

import numpy as np
import pytest
from scipy import stats

from gameflow import fixtures
from gameflow.cli import main as cli_main
from gameflow.flow import iof, select_delta
from gameflow.model import FittedModel, fit, pcs_from_pss
from gameflow.process import (MatchContext, normal_cdf, pw_sensitivity,
                              t_star, win_probability)
from gameflow.simulate import (LeagueTruth, ScoringLaw, make_rng,
                               monte_carlo_pw, simulate_league,
                               simulate_stat_path)
from gameflow.standardize import (Scaler, Standardizer, standardize_path)
from gameflow.tscore import (Kind, ScorePair, TScoreVariant, draw_benchmark,
                             t_score)

VARIANT = TScoreVariant(Kind.SYMMETRIC_RATIO)


def criterion(name):
    """Print one pass/fail line per acceptance criterion."""
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException as exc:
                print(f"[FAIL] {name}: {exc}")
                raise
            print(f"[PASS] {name}")
        return wrapper
    return deco


@criterion("pre-game score table reproduction")
def test_pregame_score_table():
    start = time.perf_counter()
    alpha0 = 1.140517
    betas = [1.088059, 1.086108, 1.05268, 0.977479, 0.952111, 0.874814]
    expected = [1.045995, 1.047706, 1.077015, 1.142951, 1.165194, 1.232967]
    got = sorted(t_score(VARIANT, ScorePair(alpha0, b)) for b in betas)
    for g, e in zip(got, sorted(expected)):
        assert abs(g - e) <= 1e-6, (g, e)
    assert time.perf_counter() - start < 1.0


@criterion("threshold selection and on-fire intervals on shipped games")
def test_delta_and_iof_reproduction(ryukyu_path, tokyo_path):
    start = time.perf_counter()
    assert select_delta(ryukyu_path) == 0.0148
    assert iof(ryukyu_path, 0.0148).intervals == (
        (0.325, 0.35), (0.55, 0.575), (0.65, 0.675), (0.85, 0.875))
    assert select_delta(tokyo_path) == 0.0242
    assert iof(tokyo_path, 0.0242).intervals == (
        (0.2, 0.225), (0.325, 0.35), (0.375, 0.4), (0.625, 0.65))
    assert time.perf_counter() - start < 1.0


@criterion("closed form matches Monte Carlo on a 5x5 grid")
def test_closed_form_vs_monte_carlo(chiba_model):
    start = time.perf_counter()
    c = draw_benchmark(VARIANT)
    n = 100_000
    for i, t in enumerate((0.0, 0.25, 0.5, 0.75, 0.9)):
        for j, target in enumerate(np.arange(c - 0.2, c + 0.21, 0.1)):
            if t == 0.0:
                # the blend pins T* to the pre-game level; move the
                # opponent strength to hit the target
                beta0 = (chiba_model.alpha0 * (2.0 - target) if target >= c
                         else chiba_model.alpha0 / target)
                ctx = MatchContext(chiba_model, opponent_tfs=beta0)
                s = ScorePair(0.0, 0.0)
            else:
                ctx = MatchContext(chiba_model,
                                   opponent_tfs=chiba_model.alpha0)
                t_ab = (target - (1.0 - t) * ctx.initial_level()) / t
                if t_ab >= c:
                    a = 150.0 / (3.0 - t_ab)
                    s = ScorePair(a, 150.0 - a)
                else:
                    b = 150.0 / (1.0 + t_ab)
                    s = ScorePair(150.0 - b, b)
            assert t_star(ctx, t, s) == pytest.approx(target, abs=1e-12)
            exact = win_probability(ctx, t, s)
            mc = monte_carlo_pw(ctx, t, s, n, make_rng(100, i, j))
            se = max(mc["std_error"], math.sqrt(exact * (1 - exact) / n))
            assert abs(mc["estimate"] - exact) <= 3 * se, (t, target)
    assert time.perf_counter() - start < 30.0


@criterion("reference-game opening win probability and endpoint rule")
def test_reference_anchor(chiba_model, tfs_table):
    assert math.sqrt(chiba_model.total_variance) == pytest.approx(0.13524,
                                                                  abs=1e-9)
    ctx = MatchContext(chiba_model, opponent_tfs=tfs_table["Ryukyu"])
    assert ctx.initial_level() == pytest.approx(1.045995, abs=1e-6)
    pw0 = win_probability(ctx, 0.0, ScorePair(0.0, 0.0))
    assert abs(pw0 - 0.6331) <= 5e-4
    assert win_probability(ctx, 1.0, ScorePair(73, 88)) == 0.0
    assert win_probability(ctx, 1.0, ScorePair(94, 66)) == 1.0


@criterion("fit recovers simulated truth within 4 standard errors")
def test_fit_recovery():
    start = time.perf_counter()
    d = 8
    truth = LeagueTruth(
        alpha0=1.12,
        alpha=(0.06, -0.02, 0.01, -0.007, 0.056, 0.006, -0.01, -0.014),
        sigma=0.05)
    games = simulate_league(truth, None, 400, make_rng(2024),
                            round_scores=False)
    model = fit(games, VARIANT, truth.stat_ids)
    # restate the truth in the fitted model's coordinates: the generator
    # standardizes against the law's own moments, the fit against the
    # sample scaler
    from tests.test_model import implied_coefficients
    implied = implied_coefficients(truth, model)
    assert abs(model.alpha0 - implied[0]) <= 4 * model.inference[0].std_error
    for a_hat, a_true, inf in zip(model.alpha, implied[1:],
                                  model.inference[1:]):
        assert abs(a_hat - a_true) <= 4 * inf.std_error
    assert model.tau2 == pytest.approx(sum(a * a for a in model.alpha),
                                       rel=1e-12)
    assert model.d == d
    assert time.perf_counter() - start < 10.0


@criterion("fitted strength rank-correlates with true strength")
def test_tfs_strength_correlation():
    true_alpha0 = (1.14, 1.09, 0.95, 0.87)
    hits = 0
    for rep in range(100):
        fitted = []
        for i, a0 in enumerate(true_alpha0):
            truth = LeagueTruth(alpha0=a0, alpha=(0.05, -0.02), sigma=0.05,
                                stat_ids=("s0", "s1"))
            games = simulate_league(truth, None, 60, make_rng(500, rep, i),
                                    round_scores=False)
            fitted.append(fit(games, VARIANT, truth.stat_ids).alpha0)
        rho = stats.spearmanr(true_alpha0, fitted).statistic
        hits += rho >= 0.9
    assert hits >= 95, f"only {hits}/100 replications reached rho >= 0.9"


@criterion("contribution scores conserve the team intercept")
def test_conservation_suite():
    rng = make_rng(7)
    alpha0 = 1.140517
    for _ in range(10_000):
        j = int(rng.integers(2, 13))
        pss = rng.normal(0.0, 0.5, size=j)
        pcs = pcs_from_pss(alpha0, list(pss))
        total = sum(pcs)
        assert abs(total - alpha0) <= 1e-12 * abs(alpha0)
        mean = pss.mean()
        d_k = np.abs(pss - mean).sum()
        if d_k > 0:
            assert np.abs(pss - mean).sum() / d_k == pytest.approx(1.0,
                                                                   rel=1e-12)
    # all-equal roster: the deviation term vanishes, equal split
    assert pcs_from_pss(alpha0, [0.2] * 5) == [pytest.approx(alpha0 / 5)] * 5


@criterion("diffusion limit of standardized compound-Poisson paths")
def test_diffusion_limit():
    law = ScoringLaw(intensity=10_000.0)
    scaler = Standardizer({"sim": Scaler(law.final_mean(),
                                         math.sqrt(law.final_var()))})
    rng = make_rng(99)
    n_rep = 10_000
    incs = np.empty(n_rep)
    for k in range(n_rep):
        path = simulate_stat_path(law, rng, 4)
        std = standardize_path(path, scaler)
        incs[k] = std.values[1]  # increment over the first 0.25 window
    se = incs.std(ddof=1) / math.sqrt(n_rep)
    assert abs(incs.mean()) <= 3 * se
    assert 0.2375 <= incs.var(ddof=1) <= 0.2625

    # evenly matched unit-mark scoring: (a-b)/sqrt(a+b) ~ N(0, 1)
    unit = ScoringLaw(intensity=1_000.0, point_dist=(1.0, 0.0, 0.0))
    tvals = np.empty(n_rep)
    for k in range(n_rep):
        a = simulate_stat_path(unit, rng, 2).values[-1]
        b = simulate_stat_path(unit, rng, 2).values[-1]
        tvals[k] = (a - b) / math.sqrt(a + b)
    assert 0.9 <= tvals.var(ddof=1) <= 1.1
    assert abs(tvals.mean()) <= 3 * tvals.std(ddof=1) / math.sqrt(n_rep)


@criterion("on-fire increment sum strictly exceeds theta times step count")
def test_iof_inequality(ryukyu_path, tokyo_path):
    from gameflow.process import ProcessPath
    checked = 0
    for path in (ryukyu_path, tokyo_path):
        res = iof(path, select_delta(path))
        n_steps = round(res.total_length * path.grid_r)
        assert res.increment_sum > res.threshold_theta * n_steps
        checked += 1
    rng = make_rng(314)
    while checked < 1002:
        steps = rng.normal(0.0, 0.02, size=40)
        mt = np.concatenate(([1.0], 1.0 + np.cumsum(steps)))
        r = len(steps)
        path = ProcessPath(times=[i / r for i in range(r + 1)],
                           mt=list(mt), pw=[0.5] * (r + 1),
                           score_a=[0.0] * (r + 1), score_b=[0.0] * (r + 1))
        theta = select_delta(path)
        res = iof(path, theta)
        n_steps = round(res.total_length * path.grid_r)
        assert n_steps >= 4
        assert res.increment_sum > theta * n_steps
        checked += 1


@criterion("win-probability sensitivity matches finite differences")
def test_sensitivity_finite_differences():
    rng = make_rng(555)
    h = 1e-5
    for _ in range(100):
        d = int(rng.integers(1, 4))
        alpha = tuple(float(a) for a in rng.uniform(-0.1, 0.1, size=d))
        model = FittedModel(
            team_id="t", variant=VARIANT, alpha0=1.1, alpha=alpha,
            sigma2=float(rng.uniform(0.001, 0.02)),
            tau2=sum(a * a for a in alpha),
            scaler=Standardizer({f"s{i}": Scaler(10.0, 1.0)
                                 for i in range(d)}),
            inference=(), n_games=60,
            stat_ids=tuple(f"s{i}" for i in range(d)))
        ctx = MatchContext(model, opponent_tfs=float(rng.uniform(0.9, 1.3)))
        t = float(rng.uniform(0.0, 0.95))
        a, b = sorted(rng.uniform(10.0, 90.0, size=2))
        s = ScorePair(b, a)
        grad = pw_sensitivity(ctx, t, s)
        base = t_star(ctx, t, s)
        scale = math.sqrt((1.0 - t) * model.total_variance)
        c = draw_benchmark(VARIANT)
        for i, a_i in enumerate(model.alpha):
            zu = ((base + a_i * h) - c) / scale
            zd = ((base - a_i * h) - c) / scale
            # difference on whichever tail is small, where the CDF keeps
            # full relative precision: Phi(zu) - Phi(zd) = Phi(-zd) - Phi(-zu)
            if base >= c:
                fd = (normal_cdf(-zd) - normal_cdf(-zu)) / (2.0 * h)
            else:
                fd = (normal_cdf(zu) - normal_cdf(zd)) / (2.0 * h)
            if max(abs(fd), abs(grad[i])) < 1e-12:
                continue  # deep tail: the finite difference underflows
            assert abs(grad[i] - fd) <= 1e-6 * abs(fd)


@criterion("simulate, fit and replay are byte-identical across reruns")
def test_cli_determinism(tmp_path):
    def dir_bytes(d):
        return {str(p.relative_to(d)): p.read_bytes()
                for p in sorted(d.rglob("*")) if p.is_file()}

    sims, fits, replays = [], [], []
    for run in ("one", "two"):
        sim = tmp_path / f"sim_{run}"
        assert cli_main(["simulate", "--seed", "11", "--teams", "2",
                         "--games", "20", "--out", str(sim)]) == 0
        sims.append(dir_bytes(sim))
        model = tmp_path / f"model_{run}.json"
        assert cli_main(["fit", "--bundle", str(sim / "team1"),
                         "--team-id", "team1", "--out", str(model)]) == 0
        fits.append(model.read_bytes())
        rep = tmp_path / f"replay_{run}"
        assert cli_main(["replay", "--bundle",
                         str(fixtures.path("chiba_ryukyu")),
                         "--team-id", "Chiba",
                         "--model", str(fixtures.path("chiba_model.json")),
                         "--opponents", str(fixtures.path("opponents.json")),
                         "--out", str(rep)]) == 0
        replays.append(dir_bytes(rep))
    assert sims[0] == sims[1]
    assert fits[0] == fits[1]
    assert replays[0] == replays[1]
