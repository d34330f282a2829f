"""Event-driven in-game state: fold events, advance the clock, undo.

A session owns a model and an opponent strength.  Events accumulate into
cumulative stats and the score; every TICK advances one grid step and
appends (dominance level, win probability, sensitivity) to the path.
UNDO reverts exactly one event by rebuilding the state from the retained
event log, which is exact by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .data import (SCORE_AGAINST, SCORE_FOR, GameRecord, OnCourtSpan)
from .errors import ClockExhausted, DomainError, IllegalSub
from .model import FittedModel
from .process import MatchContext, pw_sensitivity, win_probability
from .standardize import StatPath, standardize_final
from .tscore import ScorePair

#: event type -> stat increments applied to the team tallies
_SIMPLE_EVENTS = {
    "REB_DEF": {"DR": 1},
    "REB_OFF": {"OR": 1},
    "ASSIST": {"AS": 1},
    "TURNOVER": {"TO": 1},
    "FOUL_DRAWN": {"FD": 1},
}


@dataclass(frozen=True)
class Event:
    type: str
    points: int | None = None
    player: str | None = None

    @classmethod
    def parse(cls, doc: dict[str, Any]) -> "Event":
        etype = doc.get("type")
        if not isinstance(etype, str):
            raise DomainError("event requires a string 'type'")
        points = doc.get("points")
        player = doc.get("player")
        ev = cls(type=etype, points=points, player=player)
        ev.check()
        return ev

    def check(self) -> None:
        if self.type in ("SCORE_FOR", "SCORE_AGAINST"):
            if self.points not in (1, 2, 3):
                raise DomainError(f"{self.type} requires points in {{1,2,3}}")
        elif self.type in ("SUB_IN", "SUB_OUT"):
            if not self.player:
                raise DomainError(f"{self.type} requires a player")
        elif self.type not in _SIMPLE_EVENTS and self.type not in ("TICK", "UNDO"):
            raise DomainError(f"unknown event type {self.type!r}")


@dataclass
class LiveGameState:
    """Mutable in-game state; the computational stand-in for the
    information available at the current clock step."""

    grid_r: int
    step: int = 0
    stats: dict[str, float] = field(default_factory=dict)
    score_a: float = 0.0
    score_b: float = 0.0
    on_court: set[str] = field(default_factory=set)
    # per player: closed [in_step, out_step] pairs plus the open entry step
    spans: dict[str, list[tuple[float, float]]] = field(default_factory=dict)
    entered_at: dict[str, float] = field(default_factory=dict)

    @property
    def t(self) -> float:
        return self.step / self.grid_r


class LiveSession:
    """Single-writer session; readers get plain-dict snapshots."""

    def __init__(self, model: FittedModel, opponent_tfs: float,
                 grid_r: int = 40, theta: float = 0.02, epsilon: float = 0.1):
        self.ctx = MatchContext(model=model, opponent_tfs=opponent_tfs,
                                grid_r=grid_r)
        self.theta = theta
        self.epsilon = epsilon
        self.events: list[Event] = []
        self._seq = 0
        self._reset()

    # -- state construction --------------------------------------------------

    def _reset(self) -> None:
        self.state = LiveGameState(grid_r=self.ctx.grid_r)
        self.path_mt = [self._mt_now()]
        self.path_pw = [self._pw_now()]
        self.path_a = [0.0]
        self.path_b = [0.0]
        self.stat_history = [dict(self.state.stats)]

    def _mt_now(self) -> float:
        s = self.state
        mt = self.ctx.initial_level()
        for a_i, sid in zip(self.ctx.model.alpha, self.ctx.model.stat_ids):
            raw = s.stats.get(sid, 0.0)
            sc = self.ctx.model.scaler.scaler_for(sid)
            mt += a_i * (raw - sc.m * s.t) / sc.v
        return mt

    def _pw_now(self) -> float:
        s = self.state
        return win_probability(self.ctx, s.t, ScorePair(s.score_a, s.score_b))

    def _sensitivity_now(self) -> list[float]:
        s = self.state
        if s.t >= 1.0:
            return [0.0] * self.ctx.model.d
        return pw_sensitivity(self.ctx, s.t, ScorePair(s.score_a, s.score_b))

    # -- event folding ---------------------------------------------------------

    def apply(self, event: Event) -> dict:
        event.check()
        if event.type == "UNDO":
            if self.events:
                self.events.pop()
                self._replay_log()
        else:
            self._fold(event)
            self.events.append(event)
        self._seq += 1
        return self.snapshot()

    def _replay_log(self) -> None:
        log = self.events
        self.events = []
        self._reset()
        for ev in log:
            self._fold(ev)
            self.events.append(ev)

    def _fold(self, ev: Event) -> None:
        s = self.state
        if ev.type == "TICK":
            if s.step >= s.grid_r:
                raise ClockExhausted("game clock is already at t = 1")
            s.step += 1
            self.path_mt.append(self._mt_now())
            self.path_pw.append(self._pw_now())
            self.path_a.append(s.score_a)
            self.path_b.append(s.score_b)
            self.stat_history.append(dict(s.stats))
            return
        if ev.type == "SCORE_FOR":
            s.stats["PTs"] = s.stats.get("PTs", 0.0) + ev.points
            if ev.points in (2, 3):
                s.stats["FGM"] = s.stats.get("FGM", 0.0) + 1
            if ev.points == 3:
                s.stats["3FGM"] = s.stats.get("3FGM", 0.0) + 1
            s.score_a += ev.points
            return
        if ev.type == "SCORE_AGAINST":
            s.score_b += ev.points
            return
        if ev.type in _SIMPLE_EVENTS:
            for sid, inc in _SIMPLE_EVENTS[ev.type].items():
                s.stats[sid] = s.stats.get(sid, 0.0) + inc
            return
        if ev.type == "SUB_IN":
            if ev.player in s.on_court:
                raise IllegalSub(f"{ev.player} is already on the court")
            s.on_court.add(ev.player)
            s.entered_at[ev.player] = s.t
            return
        if ev.type == "SUB_OUT":
            if ev.player not in s.on_court:
                raise IllegalSub(f"{ev.player} is not on the court")
            s.on_court.remove(ev.player)
            in_t = s.entered_at.pop(ev.player)
            if s.t > in_t:
                s.spans.setdefault(ev.player, []).append((in_t, s.t))
            return
        raise DomainError(f"unknown event type {ev.type!r}")

    # -- read access -------------------------------------------------------------

    def iof_intervals(self) -> list[tuple[float, float]]:
        r = self.ctx.grid_r
        out = []
        for i in range(len(self.path_mt) - 1):
            if self.path_mt[i + 1] - self.path_mt[i] > self.theta:
                out.append((i / r, (i + 1) / r))
        return out

    def snapshot(self) -> dict:
        s = self.state
        f = "{:.17g}".format
        return {
            "seq": self._seq,
            "step": s.step,
            "t": f(s.t),
            "score": {"a": f(s.score_a), "b": f(s.score_b)},
            "stats": {sid: f(v) for sid, v in sorted(s.stats.items())},
            "on_court": sorted(s.on_court),
            "mt": f(self._mt_now()),
            "pw": f(self._pw_now()),
            "sensitivity": {
                sid: f(v) for sid, v in zip(self.ctx.model.stat_ids,
                                            self._sensitivity_now())
            },
            "path": {
                "t": [f(i / self.ctx.grid_r) for i in range(len(self.path_mt))],
                "mt": [f(v) for v in self.path_mt],
                "pw": [f(v) for v in self.path_pw],
            },
            "iof": [[f(lo), f(hi)] for lo, hi in self.iof_intervals()],
            "theta": f(self.theta),
            "epsilon": f(self.epsilon),
            "initial_pw": f(self.path_pw[0]),
        }

    # -- batch equivalence ----------------------------------------------------

    def implied_record(self, game_id: str = "live") -> GameRecord:
        """The game record this event log implies, for batch replay.

        Only valid once the clock has reached t = 1 (all grid points
        observed).
        """
        s = self.state
        if s.step != s.grid_r:
            raise ClockExhausted(
                f"clock at step {s.step}/{s.grid_r}; finish the game first")
        stat_ids = sorted({sid for st in self.stat_history for sid in st})
        team_paths = {
            sid: StatPath(sid, tuple(st.get(sid, 0.0) for st in self.stat_history))
            for sid in stat_ids
        }
        team_paths[SCORE_FOR] = StatPath(SCORE_FOR, tuple(self.path_a))
        team_paths[SCORE_AGAINST] = StatPath(SCORE_AGAINST, tuple(self.path_b))
        spans = {pid: list(ivs) for pid, ivs in s.spans.items()}
        for pid, in_t in s.entered_at.items():
            if s.t > in_t:
                spans.setdefault(pid, []).append((in_t, s.t))
        oncourt = {pid: OnCourtSpan(pid, tuple(sorted(ivs)))
                   for pid, ivs in spans.items()}
        return GameRecord(
            game_id=game_id,
            team_id=self.ctx.model.team_id,
            opponent_id="live-opponent",
            grid_r=s.grid_r,
            team_paths=team_paths,
            player_paths={},
            oncourt=oncourt,
            final=(self.path_a[-1], self.path_b[-1]),
        )
