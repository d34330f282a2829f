"""Game-bundle CSV ingestion and model persistence.

A bundle is one team's games as four long-format CSV files in a directory:

    games.csv        game_id, opponent_id, final_a, final_b, grid_R
    team_paths.csv   game_id, t_index, stat_id, value
    player_paths.csv game_id, player_id, t_index, stat_id, value
    oncourt.csv      game_id, player_id, in_t, out_t

Score paths ride along in team_paths.csv under the reserved stat ids
``score_for`` / ``score_against``.  Parsers reject inconsistent input
rather than repairing it.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConsistencyError, ParseError, VersionMismatch
from .model import CoefficientInference, FittedModel
from .standardize import Scaler, Standardizer, StatPath
from .tscore import TScoreVariant

SCORE_FOR = "score_for"
SCORE_AGAINST = "score_against"
RESERVED_STATS = (SCORE_FOR, SCORE_AGAINST)

#: the eight standard box-score stats
STANDARD_STATS = ("PTs", "FGM", "3FGM", "OR", "DR", "AS", "TO", "FD")

MODEL_SCHEMA_VERSION = 1

# allocation sum check; integer-valued data passes exactly
_SUM_RTOL = 1e-9


@dataclass(frozen=True)
class OnCourtSpan:
    """Disjoint on-court intervals of one player, within [0, 1]."""

    player_id: str
    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        prev_end = 0.0
        for lo, hi in self.intervals:
            if not (0.0 <= lo < hi <= 1.0):
                raise ConsistencyError(
                    f"{self.player_id}: bad on-court interval [{lo}, {hi}]")
            if lo < prev_end:
                raise ConsistencyError(
                    f"{self.player_id}: overlapping on-court intervals")
            prev_end = hi

    def total(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)


@dataclass(frozen=True)
class GameRecord:
    game_id: str
    team_id: str
    opponent_id: str
    grid_r: int
    team_paths: dict[str, StatPath]
    player_paths: dict[str, dict[str, StatPath]]
    oncourt: dict[str, OnCourtSpan]
    final: tuple[float, float]

    def __post_init__(self):
        self.validate()

    # -- accessors ---------------------------------------------------------

    def stat_ids(self) -> list[str]:
        return [s for s in self.team_paths if s not in RESERVED_STATS]

    def team_path(self, stat_id: str) -> StatPath:
        try:
            return self.team_paths[stat_id]
        except KeyError:
            raise ConsistencyError(
                f"game {self.game_id}: no team path for stat {stat_id!r}")

    def team_final(self, stat_id: str) -> float:
        return self.team_path(stat_id).values[-1]

    def score_paths(self) -> tuple[StatPath, StatPath]:
        return self.team_path(SCORE_FOR), self.team_path(SCORE_AGAINST)

    def player_ids(self) -> list[str]:
        return list(self.player_paths)

    def player_final(self, player_id: str, stat_id: str) -> float:
        paths = self.player_paths.get(player_id, {})
        if stat_id in paths:
            return paths[stat_id].values[-1]
        return 0.0

    def minutes_fraction(self, player_id: str) -> float:
        span = self.oncourt.get(player_id)
        return span.total() if span is not None else 0.0

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        for sid, path in self.team_paths.items():
            self._check_raw(path, f"team stat {sid!r}")
        for pid, paths in self.player_paths.items():
            for sid, path in paths.items():
                self._check_raw(path, f"player {pid!r} stat {sid!r}")
                if sid in RESERVED_STATS:
                    raise ConsistencyError(
                        f"game {self.game_id}: player {pid!r} carries "
                        f"reserved stat {sid!r}")
        # player stats must sum to the team stat at every grid point
        for sid in self.stat_ids():
            team = self.team_paths[sid].values
            carriers = [p[sid].values for p in self.player_paths.values()
                        if sid in p]
            if not carriers:
                continue
            for r in range(self.grid_r + 1):
                total = sum(vals[r] for vals in carriers)
                if abs(total - team[r]) > _SUM_RTOL * max(1.0, abs(team[r])):
                    raise ConsistencyError(
                        f"game {self.game_id}, stat {sid!r}: player sum "
                        f"{total!r} != team value {team[r]!r} at t_{r}")
        sf, sa = self.score_paths()
        if (sf.values[-1], sa.values[-1]) != self.final:
            raise ConsistencyError(
                f"game {self.game_id}: score paths end at "
                f"({sf.values[-1]}, {sa.values[-1]}) but final is {self.final}")

    def _check_raw(self, path: StatPath, label: str) -> None:
        if path.grid_r != self.grid_r:
            raise ConsistencyError(
                f"game {self.game_id}, {label}: grid {path.grid_r} != "
                f"{self.grid_r}")
        if path.values[0] != 0.0:
            raise ConsistencyError(
                f"game {self.game_id}, {label}: path starts at "
                f"{path.values[0]}, expected 0")
        for r in range(path.grid_r):
            if path.values[r + 1] < path.values[r]:
                raise ConsistencyError(
                    f"game {self.game_id}, {label}: decreases at t_{r + 1}")


# -- bundle parsing ----------------------------------------------------------


def _read_rows(path: Path, columns: tuple[str, ...]):
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(path, 0, f"cannot open: {exc}")
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError(path, 1, "missing header row")
        missing = set(columns) - set(reader.fieldnames)
        if missing:
            raise ParseError(path, 1, f"missing columns: {sorted(missing)}")
        for row in reader:
            yield reader.line_num, row


def _parse_float(path: Path, line: int, row: dict, key: str) -> float:
    try:
        return float(row[key])
    except (TypeError, ValueError):
        raise ParseError(path, line, f"bad numeric value for {key!r}: {row[key]!r}")


def _parse_int(path: Path, line: int, row: dict, key: str) -> int:
    try:
        return int(row[key])
    except (TypeError, ValueError):
        raise ParseError(path, line, f"bad integer value for {key!r}: {row[key]!r}")


def parse_game_bundle(directory: str | Path, team_id: str = "team") -> list[GameRecord]:
    """Load and validate every game in a bundle directory."""
    directory = Path(directory)
    games_meta: dict[str, dict] = {}
    p = directory / "games.csv"
    for line, row in _read_rows(p, ("game_id", "opponent_id", "final_a",
                                    "final_b", "grid_R")):
        gid = row["game_id"]
        if gid in games_meta:
            raise ParseError(p, line, f"duplicate game_id {gid!r}")
        games_meta[gid] = {
            "opponent_id": row["opponent_id"],
            "final": (_parse_float(p, line, row, "final_a"),
                      _parse_float(p, line, row, "final_b")),
            "grid_r": _parse_int(p, line, row, "grid_R"),
        }

    team_vals: dict[str, dict[str, dict[int, float]]] = {}
    p = directory / "team_paths.csv"
    for line, row in _read_rows(p, ("game_id", "t_index", "stat_id", "value")):
        gid = row["game_id"]
        if gid not in games_meta:
            raise ParseError(p, line, f"unknown game_id {gid!r}")
        cell = team_vals.setdefault(gid, {}).setdefault(row["stat_id"], {})
        idx = _parse_int(p, line, row, "t_index")
        if idx in cell:
            raise ParseError(p, line, f"duplicate point ({gid}, {row['stat_id']}, {idx})")
        cell[idx] = _parse_float(p, line, row, "value")

    player_vals: dict[str, dict[str, dict[str, dict[int, float]]]] = {}
    p = directory / "player_paths.csv"
    if p.exists():
        for line, row in _read_rows(p, ("game_id", "player_id", "t_index",
                                        "stat_id", "value")):
            gid = row["game_id"]
            if gid not in games_meta:
                raise ParseError(p, line, f"unknown game_id {gid!r}")
            cell = (player_vals.setdefault(gid, {})
                    .setdefault(row["player_id"], {})
                    .setdefault(row["stat_id"], {}))
            idx = _parse_int(p, line, row, "t_index")
            if idx in cell:
                raise ParseError(
                    p, line,
                    f"duplicate point ({gid}, {row['player_id']}, "
                    f"{row['stat_id']}, {idx})")
            cell[idx] = _parse_float(p, line, row, "value")

    spans: dict[str, dict[str, list[tuple[float, float]]]] = {}
    p = directory / "oncourt.csv"
    if p.exists():
        for line, row in _read_rows(p, ("game_id", "player_id", "in_t", "out_t")):
            gid = row["game_id"]
            if gid not in games_meta:
                raise ParseError(p, line, f"unknown game_id {gid!r}")
            spans.setdefault(gid, {}).setdefault(row["player_id"], []).append(
                (_parse_float(p, line, row, "in_t"),
                 _parse_float(p, line, row, "out_t")))

    def build_path(gid: str, sid: str, cells: dict[int, float], grid_r: int,
                   label: str) -> StatPath:
        missing = [r for r in range(grid_r + 1) if r not in cells]
        if missing:
            raise ConsistencyError(
                f"game {gid}, {label} {sid!r}: missing t_index {missing[0]}")
        extra = [r for r in cells if not 0 <= r <= grid_r]
        if extra:
            raise ConsistencyError(
                f"game {gid}, {label} {sid!r}: t_index {extra[0]} out of range")
        return StatPath(sid, tuple(cells[r] for r in range(grid_r + 1)))

    records = []
    for gid, meta in games_meta.items():
        grid_r = meta["grid_r"]
        if gid not in team_vals:
            raise ConsistencyError(f"game {gid}: no team paths")
        team_paths = {sid: build_path(gid, sid, cells, grid_r, "team stat")
                      for sid, cells in team_vals[gid].items()}
        for reserved in RESERVED_STATS:
            if reserved not in team_paths:
                raise ConsistencyError(f"game {gid}: missing {reserved!r} path")
        player_paths = {
            pid: {sid: build_path(gid, sid, cells, grid_r, f"player {pid} stat")
                  for sid, cells in stats.items()}
            for pid, stats in player_vals.get(gid, {}).items()
        }
        oncourt = {
            pid: OnCourtSpan(pid, tuple(sorted(ivs)))
            for pid, ivs in spans.get(gid, {}).items()
        }
        records.append(GameRecord(
            game_id=gid, team_id=team_id, opponent_id=meta["opponent_id"],
            grid_r=grid_r, team_paths=team_paths, player_paths=player_paths,
            oncourt=oncourt, final=meta["final"],
        ))
    return records


# -- model persistence -------------------------------------------------------

_F = "{:.17g}".format


def save_model(model: FittedModel, path: str | Path) -> None:
    """Write a model as a versioned, human-diffable JSON document.

    All numerics are decimal strings with 17 significant digits, which
    round-trip binary64 exactly.
    """
    doc = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "team_id": model.team_id,
        "variant": {"kind": model.variant.kind.value,
                    "kappa": _F(model.variant.kappa)},
        "alpha0": _F(model.alpha0),
        "alpha": [_F(a) for a in model.alpha],
        "sigma2": _F(model.sigma2),
        "tau2": _F(model.tau2),
        "n_games": model.n_games,
        "stat_ids": list(model.stat_ids),
        "scaler": {sid: {"m": _F(sc.m), "v": _F(sc.v)}
                   for sid, sc in model.scaler.scalers.items()},
        "inference": [
            {"std_error": _F(ci.std_error), "t_value": _F(ci.t_value),
             "p_value": _F(ci.p_value)}
            for ci in model.inference
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> FittedModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    version = doc.get("schema_version")
    if version != MODEL_SCHEMA_VERSION:
        raise VersionMismatch(
            f"{path}: schema_version {version!r}, expected {MODEL_SCHEMA_VERSION}")
    variant = TScoreVariant.from_name(doc["variant"]["kind"],
                                      float(doc["variant"]["kappa"]))
    scaler = Standardizer({sid: Scaler(m=float(sc["m"]), v=float(sc["v"]))
                           for sid, sc in doc["scaler"].items()})
    try:
        return FittedModel(
            team_id=doc["team_id"],
            variant=variant,
            alpha0=float(doc["alpha0"]),
            alpha=tuple(float(a) for a in doc["alpha"]),
            sigma2=float(doc["sigma2"]),
            tau2=float(doc["tau2"]),
            scaler=scaler,
            inference=tuple(
                CoefficientInference(float(ci["std_error"]), float(ci["t_value"]),
                                     float(ci["p_value"]))
                for ci in doc["inference"]
            ),
            n_games=int(doc["n_games"]),
            stat_ids=tuple(doc["stat_ids"]),
        )
    except ValueError as exc:
        raise ConsistencyError(f"{path}: {exc}")
