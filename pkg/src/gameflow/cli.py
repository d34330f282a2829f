"""Command line pipeline: fit, replay, evaluate, simulate, serve.

Report-producing commands write delimited output plus rendered figures
into the target directory.  All outputs are deterministic functions of
the inputs and the seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import data, flow, model as model_mod, process, report, simulate
from .errors import GameflowError
from .tscore import Kind, ScorePair, TScoreVariant

_F = "{:.17g}".format


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _load_opponents(path: str | None, fallback: float | None) -> dict:
    table = {}
    if path:
        table = {k: float(v) for k, v in
                 json.loads(Path(path).read_text(encoding="utf-8")).items()}
    return {"table": table, "fallback": fallback}


def _opponent_tfs(opponents: dict, opponent_id: str) -> float:
    if opponent_id in opponents["table"]:
        return opponents["table"][opponent_id]
    if opponents["fallback"] is not None:
        return opponents["fallback"]
    raise GameflowError(
        f"no TFS known for opponent {opponent_id!r}; pass --opponents or "
        f"--opponent-tfs")


# -- subcommands ---------------------------------------------------------------


def cmd_fit(args) -> int:
    games = data.parse_game_bundle(args.bundle, team_id=args.team_id)
    variant = TScoreVariant.from_name(args.variant, args.kappa)
    stat_ids = args.stats.split(",") if args.stats else list(data.STANDARD_STATS)
    fitted = model_mod.fit(games, variant, stat_ids, team_id=args.team_id)
    data.save_model(fitted, args.out)
    names = ["TFS (alpha0)"] + [f"{sid} (alpha{i + 1})"
                                for i, sid in enumerate(fitted.stat_ids)]
    estimates = [fitted.alpha0, *fitted.alpha]
    print(f"fitted {args.team_id}: n={fitted.n_games}, d={fitted.d}, "
          f"sigma2={fitted.sigma2:.6g}, tau2={fitted.tau2:.6g}")
    print(f"{'':>14}  {'estimate':>12} {'std.error':>12} {'t':>9} {'p':>12}")
    for name, est, ci in zip(names, estimates, fitted.inference):
        print(f"{name:>14}  {est:>12.6f} {ci.std_error:>12.6f} "
              f"{ci.t_value:>9.3f} {ci.p_value:>12.6g}")
    print(f"model written to {args.out}")
    return 0


def _replay_one(fitted, game, opponents, k_target, theta_override):
    ctx = process.MatchContext(model=fitted,
                               opponent_tfs=_opponent_tfs(opponents,
                                                          game.opponent_id),
                               grid_r=game.grid_r)
    path = process.replay(ctx, game)
    theta = theta_override if theta_override is not None else \
        flow.select_delta(path, k_target)
    return ctx, path, theta, flow.iof(path, theta)


def cmd_replay(args) -> int:
    games = data.parse_game_bundle(args.bundle, team_id=args.team_id)
    fitted = data.load_model(args.model)
    opponents = _load_opponents(args.opponents, args.opponent_tfs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.game:
        games = [g for g in games if g.game_id == args.game]
        if not games:
            raise GameflowError(f"game {args.game!r} not in bundle")

    summary_rows = []
    for game in games:
        ctx, path, theta, iof_res = _replay_one(fitted, game, opponents,
                                                args.k_target, args.theta)
        rows = []
        for r in range(game.grid_r + 1):
            t = path.times[r]
            s = ScorePair(path.score_a[r], path.score_b[r])
            rows.append([
                _F(t), _F(path.score_a[r]), _F(path.score_b[r]),
                _F(path.mt[r]), _F(process.t_star(ctx, t, s)), _F(path.pw[r]),
                int(iof_res.contains(t)),
            ])
        _write_csv(out / f"{game.game_id}_series.csv",
                   ["t", "a", "b", "mt", "t_star", "pw", "iof"], rows)
        report.render_replay(path, iof_res, out / f"{game.game_id}.png",
                             title=f"{game.team_id} vs {game.opponent_id}",
                             epsilon=args.epsilon)
        stops = flow.stopping_times(path, theta, args.epsilon)
        summary_rows.append([
            game.game_id, game.opponent_id, _F(theta),
            len(iof_res.intervals), _F(iof_res.total_length),
            _F(iof_res.increment_sum),
            ";".join(f"[{_F(lo)},{_F(hi)})" for lo, hi in iof_res.intervals),
            "" if stops["reversal_time"] is None else _F(stops["reversal_time"]),
            "" if stops["pw_drop_time"] is None else _F(stops["pw_drop_time"]),
        ])
    _write_csv(out / "iof_summary.csv",
               ["game_id", "opponent_id", "theta", "n_intervals",
                "total_length", "increment_sum", "intervals",
                "reversal_time", "pw_drop_time"], summary_rows)
    print(f"replayed {len(games)} game(s) into {out}")
    return 0


def cmd_evaluate(args) -> int:
    games = data.parse_game_bundle(args.bundle, team_id=args.team_id)
    fitted = data.load_model(args.model)
    opponents = _load_opponents(args.opponents, args.opponent_tfs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    game_evals = []
    rows = []
    for game in games:
        _, path, theta, iof_res = _replay_one(fitted, game, opponents,
                                              args.k_target, args.theta)
        evals = model_mod.player_scores(fitted, game)
        for ev in evals:
            span = game.oncourt.get(ev.player_id)
            ev.x_index = flow.x_index(span, iof_res) if span else 0.0
            ev.stats_x = theta * ev.x_index
            rows.append([game.game_id, ev.player_id, _F(ev.pss), _F(ev.pcs),
                         _F(ev.x_index), _F(ev.stats_x),
                         _F(ev.minutes_fraction), _F(theta)])
        game_evals.append(flow.GameEvaluation(game_id=game.game_id,
                                              theta=theta,
                                              players=tuple(evals)))
    _write_csv(out / "player_games.csv",
               ["game_id", "player_id", "pss", "pcs", "x_index", "stats_x",
                "minutes_fraction", "theta"], rows)

    totals = flow.player_totals(game_evals, denominator=args.pts_denominator)
    total_rows = [[pid, _F(v)] for pid, v in sorted(totals.items())]
    _write_csv(out / "player_totals.csv", ["player_id", "pts"], total_rows)
    report.render_player_table(totals, out / "player_totals.png",
                               title=f"{args.team_id}: season player totals")
    print(f"evaluated {len(games)} game(s), {len(totals)} player(s) into {out}")
    return 0


def cmd_simulate(args) -> int:
    rng = simulate.make_rng(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    base_alpha = (0.06, -0.02, 0.01, -0.007, 0.056, 0.006, -0.01, -0.014)
    team_ids = [f"team{i + 1}" for i in range(args.teams)]
    alpha0s = [1.14 - 0.09 * i for i in range(args.teams)]
    laws = tuple(simulate.ScoringLaw(args.intensity * (0.5 + 0.125 * i),
                                     (0.2, 0.6, 0.2))
                 for i in range(len(data.STANDARD_STATS)))
    manifest = {"seed": args.seed, "teams": {}}
    for idx, (tid, a0) in enumerate(zip(team_ids, alpha0s)):
        truth = simulate.LeagueTruth(alpha0=a0, alpha=base_alpha,
                                     sigma=args.sigma, stat_laws=laws)
        opponents = [t for t in team_ids if t != tid] or ["opp"]
        games = simulate.simulate_league(
            truth, None, args.games, simulate.make_rng(args.seed, idx),
            grid_r=args.grid_r, opponent_ids=opponents, team_id=tid)
        _write_bundle(games, out / tid)
        manifest["teams"][tid] = {"alpha0": _F(a0),
                                  "alpha": [_F(a) for a in base_alpha],
                                  "sigma": _F(args.sigma)}
    (out / "truth.json").write_text(json.dumps(manifest, indent=2) + "\n",
                                    encoding="utf-8")
    print(f"simulated {args.teams} team(s) x {args.games} game(s) into {out}")
    return 0


def _write_bundle(games, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    game_rows, team_rows, player_rows, court_rows = [], [], [], []
    for g in games:
        game_rows.append([g.game_id, g.opponent_id, _F(g.final[0]),
                          _F(g.final[1]), g.grid_r])
        for sid, path in g.team_paths.items():
            for r, v in enumerate(path.values):
                team_rows.append([g.game_id, r, sid, _F(v)])
        for pid, paths in g.player_paths.items():
            for sid, path in paths.items():
                for r, v in enumerate(path.values):
                    player_rows.append([g.game_id, pid, r, sid, _F(v)])
        for pid, span in g.oncourt.items():
            for lo, hi in span.intervals:
                court_rows.append([g.game_id, pid, _F(lo), _F(hi)])
    _write_csv(directory / "games.csv",
               ["game_id", "opponent_id", "final_a", "final_b", "grid_R"],
               game_rows)
    _write_csv(directory / "team_paths.csv",
               ["game_id", "t_index", "stat_id", "value"], team_rows)
    _write_csv(directory / "player_paths.csv",
               ["game_id", "player_id", "t_index", "stat_id", "value"],
               player_rows)
    _write_csv(directory / "oncourt.csv",
               ["game_id", "player_id", "in_t", "out_t"], court_rows)


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(model_dir=args.model_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gameflow",
        description="Dominance modeling, win probability and player flow "
                    "scoring from cumulative box-score paths.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common_model_io(p):
        p.add_argument("--bundle", required=True, help="game bundle directory")
        p.add_argument("--team-id", default="team")
        p.add_argument("--opponents",
                       help="JSON file mapping opponent_id to TFS")
        p.add_argument("--opponent-tfs", type=float, default=None,
                       help="fallback opponent TFS")
        p.add_argument("--k-target", type=int, default=4,
                       help="rank of the rise used for threshold selection")
        p.add_argument("--theta", type=float, default=None,
                       help="fixed per-step threshold (overrides selection)")
        p.add_argument("--epsilon", type=float, default=0.1,
                       help="win-probability alert level")
        p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("fit", help="fit a dominance model from a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--team-id", default="team")
    p.add_argument("--variant", default="symratio",
                   choices=[k.value for k in Kind])
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--stats", default=None,
                   help="comma-separated stat ids (default: the standard 8)")
    p.add_argument("--out", required=True, help="model file to write")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("replay", help="replay games into series + figures")
    p.add_argument("--model", required=True)
    p.add_argument("--game", default=None, help="replay a single game id")
    common_model_io(p)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("evaluate", help="per-player scores and season totals")
    p.add_argument("--model", required=True)
    p.add_argument("--pts-denominator", default="all_games",
                   choices=["all_games", "appearances"])
    common_model_io(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("simulate", help="generate a synthetic league")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--lambda", dest="intensity", type=float, default=80.0,
                   help="base scoring-event intensity per game")
    p.add_argument("--games", type=int, default=60)
    p.add_argument("--teams", type=int, default=4)
    p.add_argument("--sigma", type=float, default=0.05)
    p.add_argument("--grid-r", type=int, default=8)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the live session HTTP service")
    p.add_argument("--model-dir", default=".")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GameflowError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
