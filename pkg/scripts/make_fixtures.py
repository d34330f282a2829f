"""Regenerate the shipped fixture bundles under src/gameflow/fixtures/.

The two reference games are digitized minute-by-minute series (dominance
level and win probability).  For each game we synthesize a replayable
bundle:

  * a single-stat model whose replayed dominance path reproduces the
    reference mt series up to a constant < 1e-6,
  * real-valued score paths chosen so the closed-form win probability
    reproduces the reference pw series (chiba_ryukyu only; the
    chiba_tokyo pw column saturates at 1.0 and is not invertible there),
  * a nine-player roster with fixed stat shares and on-court spans.

Run:  python scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

from scipy.special import ndtri

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gameflow.cli import _write_bundle  # noqa: E402
from gameflow.data import (SCORE_AGAINST, SCORE_FOR, GameRecord, OnCourtSpan,
                           save_model)  # noqa: E402
from gameflow.model import CoefficientInference, FittedModel  # noqa: E402
from gameflow.standardize import Scaler, Standardizer, StatPath  # noqa: E402
from gameflow.tscore import Kind, ScorePair, TScoreVariant, t_score  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "src" / "gameflow" / "fixtures"

PREDICTIVE_SCALE = 0.13524  # sqrt(tau^2 + sigma^2) backed out of the t=0 point

TFS = {
    "Chiba": 1.140517,
    "Ryukyu": 1.088059,
    "Nagoya": 1.086108,
    "Kawasaki": 1.05268,
    "Osaka": 0.977479,
    "Kyoto": 0.952111,
    "Niigata": 0.874814,
}

# digitized reference series, one point per minute (R = 40)
RYUKYU_MT = [
    1.04599493, 1.042735064, 1.046206941, 1.057716457, 1.038833616,
    1.051746679, 1.044101716, 1.029130846, 1.006815518, 0.999170555,
    1.008649453, 1.009527176, 1.009446035, 0.999042193, 1.013872984,
    0.986520925, 0.976202813, 0.96611695, 0.968537301, 0.946221974,
    0.936136111, 0.913820783, 0.918884767, 0.955949238, 0.945104037,
    0.919276056, 0.92042807, 0.948317646, 0.929434806, 0.931855157,
    0.928214825, 0.905899498, 0.920609252, 0.90976405, 0.899403896,
    0.920978727, 0.895463161, 0.888577536, 0.90328729, 0.884404449,
    0.888756701,
]
RYUKYU_PW = [
    0.633112548, 0.634513252, 0.636464454, 0.640721073, 0.637927239,
    0.644038482, 0.643049384, 0.636988626, 0.623798097, 0.617088784,
    0.622861811, 0.622610706, 0.621567636, 0.608966307, 0.625037339,
    0.587687877, 0.568508225, 0.546758097, 0.544217083, 0.494311613,
    0.462780527, 0.400898633, 0.396035174, 0.473857897, 0.432507978,
    0.344229582, 0.328067189, 0.397971451, 0.315408944, 0.302127462,
    0.265602906, 0.16464631, 0.184579141, 0.120273742, 0.066702474,
    0.092440732, 0.018199993, 0.003575635, 0.00152704, 9.08712e-08,
    0.0,
]
TOKYO_MT = [
    1.059604635, 1.051959672, 1.074707065, 1.081253085, 1.095962839,
    1.07387976, 1.079736516, 1.08332943, 1.09708032, 1.125981057,
    1.11737723, 1.107017076, 1.081421344, 1.09257808, 1.127322689,
    1.118718861, 1.144666492, 1.151257567, 1.132374727, 1.122014573,
    1.135765463, 1.116882622, 1.118636297, 1.100465188, 1.111929649,
    1.114525574, 1.138755003, 1.126718689, 1.104403361, 1.097157715,
    1.10839294, 1.10546434, 1.092178239, 1.077668301, 1.088867079,
    1.103576833, 1.115571396, 1.100600526, 1.091996699, 1.095390087,
    1.076507246,
]
TOKYO_PW = [
    0.6703012, 0.6703012, 0.715821421, 0.79967093, 0.789850987,
    0.711617975, 0.6703012, 0.6703012, 0.830021513, 0.909100774,
    0.931036583, 0.95933093, 0.972067979, 0.990153758, 0.996539223,
    0.998883117, 0.999760679, 0.999962985, 0.99997657, 0.99999521,
    0.99999938, 0.999999356, 0.999999463, 0.999999974, 0.999999998,
    1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0,
    1.0, 1.0, 1.0,
]

ROSTER = [
    "Yuki Togashi", "Asato Ogawa", "Vic Law", "Fumio Nishimura",
    "Takuma Sato", "Gavin Edwards", "Shuta Hara", "John Mooney",
    "Christopher Smith",
]

VARIANT = TScoreVariant(Kind.SYMMETRIC_RATIO)
ALPHA1 = 0.1
DRIFT_M = 12.0  # per-stat drift; large enough to keep the raw path rising


def fixture_model() -> FittedModel:
    sigma2 = PREDICTIVE_SCALE ** 2 - ALPHA1 ** 2
    dummy = CoefficientInference(std_error=0.0, t_value=0.0, p_value=1.0)
    return FittedModel(
        team_id="Chiba",
        variant=VARIANT,
        alpha0=TFS["Chiba"],
        alpha=(ALPHA1,),
        sigma2=sigma2,
        tau2=ALPHA1 ** 2,
        scaler=Standardizer({"PTs": Scaler(m=DRIFT_M, v=1.0)}),
        inference=(dummy, dummy),
        n_games=60,
        stat_ids=("PTs",),
    )


def stat_path_from_mt(mt: list[float]) -> tuple[float, ...]:
    """Raw cumulative stat values whose standardized, weighted path
    reproduces mt - mt[0]."""
    r = len(mt) - 1
    values = tuple((mt[i] - mt[0]) / ALPHA1 + DRIFT_M * (i / r)
                   for i in range(r + 1))
    assert values[0] == 0.0
    for i in range(r):
        assert values[i + 1] >= values[i] >= 0.0, f"not cumulative at {i}"
    return values


def ratio_to_scores(targets: list[float], final_a: float, final_b: float,
                    growth: float = 1.12) -> tuple[list[float], list[float]]:
    """Non-decreasing score paths whose pairwise score value hits each
    target exactly; endpoint pinned to the actual final."""
    r = len(targets) - 1

    def for_side(t: float) -> float:
        # invert the symmetric-ratio form: a as a multiple of b
        return 1.0 / (2.0 - t) if t >= 1.0 else t

    b = [0.0] * (r + 1)
    a = [0.0] * (r + 1)
    for i in range(r, 0, -1):
        b[i] = final_b if i == r else b[i + 1] / growth
        a[i] = for_side(targets[i]) * b[i]
    a[r] = final_a
    for i in range(r):
        assert a[i + 1] >= a[i] and b[i + 1] >= b[i], f"score drop at {i}"
    return a, b


def invert_pw(pw: list[float], t0_level: float) -> list[float]:
    """Score values T(a(t), b(t)) that make the closed form reproduce the
    reference pw series (interior minutes only)."""
    r = len(pw) - 1
    targets = [t0_level] * (r + 1)
    for i in range(1, r):
        t = i / r
        s = PREDICTIVE_SCALE * math.sqrt(1.0 - t)
        tstar = 1.0 - s * float(ndtri(1.0 - pw[i]))
        targets[i] = (tstar - (1.0 - t) * t0_level) / t
    return targets


def shares(n: int) -> list[float]:
    raw = [1.0 + 0.25 * i for i in range(n)]
    total = sum(raw)
    return [x / total for x in raw]


def build_game(game_id: str, opponent: str, mt: list[float],
               score_a: list[float], score_b: list[float]) -> GameRecord:
    r = len(mt) - 1
    pts = stat_path_from_mt(mt)
    team_paths = {
        "PTs": StatPath("PTs", pts),
        SCORE_FOR: StatPath(SCORE_FOR, tuple(score_a)),
        SCORE_AGAINST: StatPath(SCORE_AGAINST, tuple(score_b)),
    }
    w = shares(len(ROSTER))
    player_paths = {}
    for j, pid in enumerate(ROSTER):
        if j < len(ROSTER) - 1:
            vals = tuple(w[j] * v for v in pts)
        else:
            vals = tuple(v - sum(w[i] * v for i in range(len(ROSTER) - 1))
                         for v in pts)
        player_paths[pid] = {"PTs": StatPath("PTs", vals)}
    oncourt = {}
    for j, pid in enumerate(ROSTER):
        # staggered rotation pattern, deterministic
        if j < 5:
            oncourt[pid] = OnCourtSpan(pid, ((0.0, 0.5), (0.625 + 0.025 * j, 1.0)))
        else:
            oncourt[pid] = OnCourtSpan(pid, ((0.25, 0.25 + 0.1 * (j - 4)),))
    return GameRecord(
        game_id=game_id, team_id="Chiba", opponent_id=opponent, grid_r=r,
        team_paths=team_paths, player_paths=player_paths, oncourt=oncourt,
        final=(score_a[-1], score_b[-1]),
    )


def write_series(name: str, mt: list[float], pw: list[float]) -> None:
    lines = ["t_min,mt,pw"]
    for i, (m, p) in enumerate(zip(mt, pw)):
        lines.append(f"{i},{m!r},{p!r}")
    (OUT / f"{name}_series.csv").write_text("\n".join(lines) + "\n",
                                            encoding="utf-8")


def make_events(final_a: int, final_b: int, r: int = 40) -> list[dict]:
    """Deterministic integer event stream ending at the given final score."""
    events: list[dict] = []
    starters, bench = ROSTER[:5], ROSTER[5:]
    for pid in starters:
        events.append({"type": "SUB_IN", "player": pid})

    def split_points(points: int) -> list[int]:
        out = []
        while points > 0:
            if points == 1:
                out.append(1)
                points -= 1
            elif points == 3:
                out.append(3)
                points -= 3
            else:
                out.append(2)
                points -= 2
        return out

    prev_a = prev_b = 0
    for minute in range(1, r + 1):
        cum_a = round(final_a * minute / r)
        cum_b = round(final_b * minute / r)
        for pts in split_points(cum_a - prev_a):
            events.append({"type": "SCORE_FOR", "points": pts})
        for pts in split_points(cum_b - prev_b):
            events.append({"type": "SCORE_AGAINST", "points": pts})
        prev_a, prev_b = cum_a, cum_b
        if minute % 4 == 0:
            events.append({"type": "REB_DEF"})
        if minute % 5 == 0:
            events.append({"type": "ASSIST"})
        if minute % 7 == 0:
            events.append({"type": "REB_OFF"})
        if minute % 9 == 0:
            events.append({"type": "TURNOVER"})
        if minute % 6 == 0:
            events.append({"type": "FOUL_DRAWN"})
        if minute == 20:
            for out_p, in_p in zip(starters[:4], bench):
                events.append({"type": "SUB_OUT", "player": out_p})
                events.append({"type": "SUB_IN", "player": in_p})
        events.append({"type": "TICK"})
    return events


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)

    model = fixture_model()
    save_model(model, OUT / "chiba_model.json")

    opponents = dict(TFS)
    # opponent strength implied by the Tokyo game's opening level
    opponents["Tokyo"] = TFS["Chiba"] * (2.0 - TOKYO_MT[0])
    (OUT / "opponents.json").write_text(
        json.dumps({k: repr(v) for k, v in opponents.items()}, indent=2) + "\n",
        encoding="utf-8")

    t0_ryukyu = t_score(VARIANT, ScorePair(TFS["Chiba"], TFS["Ryukyu"]))
    targets = invert_pw(RYUKYU_PW, t0_ryukyu)
    targets[-1] = t_score(VARIANT, ScorePair(73.0, 88.0))
    a, b = ratio_to_scores(targets, 73.0, 88.0)
    ryukyu = build_game("ryukyu-2023-05-28", "Ryukyu", RYUKYU_MT, a, b)
    _write_bundle([ryukyu], OUT / "chiba_ryukyu")

    # tokyo scores track the dominance level; the saturated pw column is
    # not invertible, so only the mt series is reproduced for this game
    targets = list(TOKYO_MT)
    targets[-1] = t_score(VARIANT, ScorePair(94.0, 66.0))
    a, b = ratio_to_scores(targets, 94.0, 66.0)
    tokyo = build_game("tokyo-2023-04-30", "Tokyo", TOKYO_MT, a, b)
    _write_bundle([tokyo], OUT / "chiba_tokyo")

    write_series("chiba_ryukyu", RYUKYU_MT, RYUKYU_PW)
    write_series("chiba_tokyo", TOKYO_MT, TOKYO_PW)

    events = make_events(73, 88)
    with open(OUT / "chiba_ryukyu_events.jsonl", "w", encoding="utf-8") as fh:
        for ev in events:
            fh.write(json.dumps(ev) + "\n")

    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()
