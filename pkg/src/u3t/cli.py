"""Command-line front door: verify bounds, play matches, replay records,
serve the HTTP API.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget
exhausted on a target that requires exhaustive search.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from typing import Optional

from .records import GameRecord, ReplayError, replay_states
from .render import render_state
from .strategies import (
    STRATEGY_IDS,
    STRATEGY_SEATS,
    StrategyError,
    make_mover,
    play_game,
)
from .verifier import (
    DEFAULT_FIRST_MOVE_BUDGET,
    DEFAULT_LBS_BUDGET,
    DEFAULT_SECOND_MOVE_BUDGET,
    DEFAULT_XAVIER_BUDGET,
    SearchBudget,
    VerificationReport,
    verify_first_move,
    verify_lbs,
    verify_second_move,
    verify_xavier,
)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

_VERIFIERS = {
    "xavier": (verify_xavier, DEFAULT_XAVIER_BUDGET, True),
    "lbs": (verify_lbs, DEFAULT_LBS_BUDGET, False),
    "first-move": (verify_first_move, DEFAULT_FIRST_MOVE_BUDGET, False),
    "second-move": (verify_second_move, DEFAULT_SECOND_MOVE_BUDGET, False),
}


def _default_seed(args_seed: Optional[int]) -> int:
    if args_seed is not None:
        return args_seed
    env = os.environ.get("U3T_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(EXIT_USAGE)
    return 2024


def _budget_for(target: str, args) -> SearchBudget:
    _, default, _ = _VERIFIERS[target]
    try:
        return SearchBudget(
            max_nodes=args.max_nodes if args.max_nodes is not None else default.max_nodes,
            max_seconds=args.max_seconds if args.max_seconds is not None else default.max_seconds,
            sample_count=args.samples if args.samples is not None else default.sample_count,
            seed=_default_seed(args.seed),
        )
    except ValueError as exc:
        print(f"invalid budget: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _summarize(report: VerificationReport) -> str:
    d = report.details
    parts = [
        f"target={report.target}",
        f"mode={report.mode}",
        f"boundSatisfied={str(report.bound_satisfied).lower()}",
        f"budgetExhausted={str(report.budget_exhausted).lower()}",
        f"max={report.max_plies}",
        f"min={report.min_plies}",
        f"nodes={report.nodes_explored}",
    ]
    if report.target == "xavier":
        parts.append(f"uniqueStates={report.unique_states_memoized}")
        parts.append(f"statesAtPly17={d.get('statesAtPly17')}")
        bad = d.get("badLeaves")
        if bad is not None:
            parts.append("leaves=" + ("all-WonX" if bad == 0 else f"{bad}-not-WonX"))
        parts.append(f"propertyViolations={len(report.property_violations)}")
    else:
        parts.append(f"games={d.get('sampledGames', 0)}")
        parts.append(f"violations={d.get('violationCount', sum(1 for _ in report.bound_violations))}")
    if report.target == "first-move":
        parts.append(f"wonXViolations={d.get('wonXViolations')}")
        parts.append(f"structuralViolations={d.get('structuralViolations')}")
    return " ".join(parts)


def _report_sentence(report: VerificationReport) -> str:
    if report.budget_exhausted and report.bound_satisfied is None:
        return "budget exhausted before the search closed; result undetermined"
    if report.target == "xavier":
        return (
            f"every opponent line ends in an X win within {report.max_plies} plies "
            f"(shortest {report.min_plies})"
        )
    if report.target == "lbs":
        return "no X win before ply 29 on any explored line"
    if report.target == "first-move":
        return "no X win before ply 46 against the blocker on any sampled game" \
            if report.details.get("wonXViolations") == 0 else "ply-46 bound violated"
    return "no X win before the per-prefix bound on any sampled game" \
        if report.bound_satisfied else "a per-prefix bound was violated"


def cmd_verify(args) -> int:
    targets = ["xavier", "lbs", "first-move", "second-move"] if args.target == "all" else [args.target]
    reports: dict[str, VerificationReport] = {}
    exit_code = EXIT_OK
    for target in targets:
        fn, _, requires_exhaustive = _VERIFIERS[target]
        budget = _budget_for(target, args)
        report = fn(budget)
        reports[target] = report
        print(_summarize(report))
        print(f"  {_report_sentence(report)}")
        if report.budget_exhausted and requires_exhaustive:
            exit_code = EXIT_BUDGET
            print("  skipping remaining targets: exhaustive budget exhausted", file=sys.stderr)
            break
        if not report.ok:
            exit_code = max(exit_code, EXIT_VERIFICATION_FAILED)
    payload = (
        reports[targets[0]].to_json_obj()
        if len(reports) == 1
        else {t: r.to_json_obj() for t, r in reports.items()}
    )
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
    if args.json:
        print(json.dumps(payload))
    return exit_code


def cmd_play(args) -> int:
    for seat, sid in (("X", args.x), ("O", args.o)):
        if seat not in STRATEGY_SEATS[sid]:
            print(f"strategy {sid!r} cannot play {seat}", file=sys.stderr)
            return EXIT_USAGE
    seed = _default_seed(args.seed)
    tally: Counter = Counter()
    histogram: Counter = Counter()
    games = []
    for g in range(args.count):
        x_mover = make_mover(args.x, seed + 2 * g)
        o_mover = make_mover(args.o, seed + 2 * g + 1)
        try:
            record, state = play_game(
                x_mover, o_mover, labels={"X": args.x, "O": args.o}
            )
        except StrategyError as exc:
            print(
                f"game {g + 1}: {args.x} vs {args.o} is outside a strategy's "
                f"scope: {exc}",
                file=sys.stderr,
            )
            return EXIT_VERIFICATION_FAILED
        tally[state.status] += 1
        histogram[state.ply] += 1
        games.append(record)
        if not args.json:
            print(f"game={g + 1} result={state.status} plies={state.ply}")
    payload = {
        "games": [rec.to_json_obj() for rec in games],
        "tally": dict(tally),
        "histogram": {str(k): v for k, v in sorted(histogram.items())},
    }
    if args.json:
        print(json.dumps(payload))
    else:
        for status, count in sorted(tally.items()):
            print(f"tally result={status} count={count}")
        for plies, count in sorted(histogram.items()):
            print(f"hist plies={plies} count={count}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
    return EXIT_OK


def cmd_replay(args) -> int:
    try:
        with open(args.path) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        stripped = text.lstrip()
        record = (
            GameRecord.from_json(stripped) if stripped.startswith("{")
            else GameRecord.from_text(stripped)
        )
    except ValueError as exc:
        print(f"malformed record: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        states = replay_states(record)
    except ReplayError as exc:
        print(f"illegal move at ply {exc.index + 1}: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION_FAILED
    for ply, state in enumerate(states):
        if ply == 0:
            print("start")
        else:
            move = record.moves[ply - 1]
            note = ""
            if record.annotations and record.annotations[ply - 1]:
                note = f"  [{record.annotations[ply - 1]}]"
            print(f"ply {ply}: {move.player} played {move.addr[0]}.{move.addr[1]}{note}")
        print(render_state(state))
        print()
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app()
    uvicorn.run(app, host="0.0.0.0", port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="u3t",
        description="Ultimate tic-tac-toe: verify strategy bounds, play matches, "
        "replay records, serve the web API.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="machine-check the strategy bounds")
    p_verify.add_argument(
        "target", choices=["xavier", "lbs", "first-move", "second-move", "all"]
    )
    p_verify.add_argument("--max-nodes", type=int, default=None)
    p_verify.add_argument("--max-seconds", type=float, default=None)
    p_verify.add_argument("--samples", type=int, default=None)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--json", action="store_true")
    p_verify.add_argument("--out", metavar="PATH", default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_play = sub.add_parser("play", help="play strategy-vs-strategy matches")
    p_play.add_argument("--x", required=True, choices=STRATEGY_IDS)
    p_play.add_argument("--o", required=True, choices=STRATEGY_IDS)
    p_play.add_argument("--count", type=int, default=1)
    p_play.add_argument("--seed", type=int, default=None)
    p_play.add_argument("--json", action="store_true")
    p_play.add_argument("--out", metavar="PATH", default=None)
    p_play.set_defaults(func=cmd_play)

    p_replay = sub.add_parser("replay", help="pretty-print a recorded game")
    p_replay.add_argument("path")
    p_replay.set_defaults(func=cmd_replay)

    p_serve = sub.add_parser("serve", help="serve the HTTP API and web UI")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
