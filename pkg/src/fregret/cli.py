"""Command-line experiment runner and text formats for strategies and logs.

Three subcommands: ``solve`` writes a strategy file plus a convergence CSV,
``exploit`` prints the exploitability of a stored strategy, and ``compete``
pits two stored strategies against each other (exact or sampled).

Strategy files open with ``# fregret-strategy v1 game=<id>
exploit_convention=sum`` and then hold one ``infoset_key,action_index,
probability`` line per action, sorted by key then index. The convention tag
records that exploitability values are the sum over both seats' best
responses; halve them for a per-seat average. All floats are written with 17
significant digits, so write -> read -> write is byte-identical.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 validation error.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass

from .cfr import CFRConfig, solve
from .eval import exact_ev, exploitability, sampled_match
from .games import build_kuhn, build_leduc
from .rcfr import RCFRConfig, rcfr_solve

GAME_BUILDERS = {"kuhn": build_kuhn, "leduc": build_leduc}
ALGORITHMS = ("cfr", "rcfr")
STRATEGY_HEADER_PATTERN = re.compile(
    r"# fregret-strategy v1 game=(\S+) exploit_convention=sum"
)
STRATEGY_FILENAME = "strategy.csv"
CONVERGENCE_FILENAME = "convergence.csv"


@dataclass
class RunConfig:
    """Validated settings for one ``solve`` run."""

    game: str
    algo: str
    iterations: int
    estimator: str = "tree"
    target_mode: str = "exact"
    min_leaf_weight: float = 1.0
    max_depth: int | None = None
    seed: int = 0
    log_every: int = 1
    out_dir: str = "."

    def __post_init__(self) -> None:
        if self.game not in GAME_BUILDERS:
            raise ValueError(f"unknown game '{self.game}'")
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm '{self.algo}'")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.log_every < 1:
            raise ValueError("log_every must be >= 1")


def format_float(value: float) -> str:
    """Fixed 17-significant-digit decimal form; round-trips float64 exactly."""
    return f"{float(value):.17g}"


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def format_csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def write_strategy_file(path: str, game, profile) -> None:
    """Validate the profile against the game and store it sorted."""
    validate_profile(game, profile)
    lines = [
        f"# fregret-strategy v1 game={game.game_id} exploit_convention=sum"
    ]
    for key in sorted(profile):
        for index, prob in enumerate(profile[key]):
            lines.append(f"{key},{index},{format_float(prob)}")
    with open(path, "w") as handle:
        handle.write("\n".join(lines) + "\n")


def read_strategy_file(path: str):
    """Parse a strategy file; returns (game id, profile).

    Every malformed line is reported with its line number; per-infoset
    probabilities must be nonnegative, contiguous from action index 0, and
    sum to 1 within 1e-6.
    """
    with open(path) as handle:
        lines = handle.read().splitlines()
    if not lines:
        raise ValueError(f"{path}, line 1: empty strategy file")
    match = STRATEGY_HEADER_PATTERN.fullmatch(lines[0])
    if match is None:
        raise ValueError(
            f"{path}, line 1: expected header "
            f"'# fregret-strategy v1 game=<id> exploit_convention=sum'"
        )
    game_id = match.group(1)
    by_infoset: dict[str, dict[int, float]] = {}
    for number, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 3:
            raise ValueError(
                f"{path}, line {number}: expected "
                f"'infoset_key,action_index,probability'"
            )
        key, index_text, prob_text = parts
        try:
            index = int(index_text)
        except ValueError:
            raise ValueError(
                f"{path}, line {number}: bad action index '{index_text}'"
            ) from None
        try:
            prob = float(prob_text)
        except ValueError:
            raise ValueError(
                f"{path}, line {number}: bad probability '{prob_text}'"
            ) from None
        if not prob >= 0.0:
            raise ValueError(
                f"{path}, line {number}: negative probability {prob_text}"
            )
        row = by_infoset.setdefault(key, {})
        if index in row:
            raise ValueError(
                f"{path}, line {number}: duplicate entry for "
                f"'{key}' action {index}"
            )
        row[index] = prob
    profile: dict[str, tuple[float, ...]] = {}
    for key, row in by_infoset.items():
        count = len(row)
        if sorted(row) != list(range(count)):
            raise ValueError(
                f"{path}: infoset '{key}' is missing some action indices"
            )
        probs = tuple(row[i] for i in range(count))
        total = sum(probs)
        if abs(total - 1.0) > 1e-6:
            raise ValueError(
                f"{path}: probabilities for infoset '{key}' sum to "
                f"{format_float(total)}, expected 1"
            )
        profile[key] = probs
    return game_id, profile


def validate_profile(game, profile) -> None:
    """Reject unknown, missing, or wrong-arity infosets for this game."""
    for key, probs in profile.items():
        labels = game.action_labels.get(key)
        if labels is None:
            raise ValueError(
                f"infoset '{key}' does not exist in game '{game.game_id}'"
            )
        if len(probs) != len(labels):
            raise ValueError(
                f"infoset '{key}' has {len(probs)} probabilities "
                f"for {len(labels)} actions"
            )
    for key in game.action_labels:
        if key not in profile:
            raise ValueError(
                f"strategy is missing infoset '{key}' "
                f"of game '{game.game_id}'"
            )


def _load_for_game(path: str, game):
    file_game, profile = read_strategy_file(path)
    if file_game != game.game_id:
        raise ValueError(
            f"{path}: strategy is for game '{file_game}', expected "
            f"'{game.game_id}'"
        )
    validate_profile(game, profile)
    return profile


def cmd_solve(args) -> int:
    run = RunConfig(
        game=args.game,
        algo=args.algo,
        iterations=args.iters,
        estimator=args.estimator,
        target_mode=args.target_mode,
        min_leaf_weight=args.min_leaf,
        max_depth=args.max_depth,
        seed=args.seed,
        log_every=args.log_every,
        out_dir=args.out,
    )
    game = GAME_BUILDERS[run.game]()
    if run.algo == "cfr":
        profile, log = solve(
            game, CFRConfig(iterations=run.iterations, log_every=run.log_every)
        )
        header = ["t", "exploitability", "max_pos_regret_sum", "wall_ms"]
        rows = [
            (row.t, row.exploitability, row.max_pos_regret_sum, row.wall_ms)
            for row in log
        ]
    else:
        profile, convergence, sizes = rcfr_solve(
            game,
            RCFRConfig(
                iterations=run.iterations,
                estimator_kind=run.estimator,
                target_mode=run.target_mode,
                min_leaf_weight=run.min_leaf_weight,
                max_depth=run.max_depth,
                seed=run.seed,
                log_every=run.log_every,
            ),
        )
        header = [
            "t",
            "exploitability",
            "mse_p1",
            "mse_p2",
            "leaves_p1",
            "leaves_p2",
            "wall_ms",
        ]
        rows = [
            (
                conv.t,
                conv.exploitability,
                conv.mse_p1,
                conv.mse_p2,
                size.leaves_p1,
                size.leaves_p2,
                conv.wall_ms,
            )
            for conv, size in zip(convergence, sizes)
        ]
    os.makedirs(run.out_dir, exist_ok=True)
    write_strategy_file(
        os.path.join(run.out_dir, STRATEGY_FILENAME), game, profile
    )
    with open(os.path.join(run.out_dir, CONVERGENCE_FILENAME), "w") as handle:
        handle.write(format_csv(header, rows))
    return 0


def cmd_exploit(args) -> int:
    game = GAME_BUILDERS[args.game]()
    profile = _load_for_game(args.strategy, game)
    print(f"exploitability,{format_float(exploitability(game, profile))}")
    return 0


def cmd_compete(args) -> int:
    game = GAME_BUILDERS[args.game]()
    profile_a = _load_for_game(args.a, game)
    profile_b = _load_for_game(args.b, game)
    if args.exact:
        print(f"exact_ev,{format_float(exact_ev(game, profile_a, profile_b))}")
        return 0
    result = sampled_match(
        game,
        profile_a,
        profile_b,
        hands=args.hands,
        seed=args.seed,
        duplicate=args.duplicate,
    )
    sys.stdout.write(
        format_csv(
            ["hands", "mean", "stderr", "seed", "duplicate"],
            [
                (
                    result.hands,
                    result.mean,
                    result.stderr,
                    result.seed,
                    result.duplicate,
                )
            ],
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fregret",
        description="Solve and evaluate small poker games with CFR variants.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve_cmd = commands.add_parser(
        "solve", help="run a solver and write strategy + convergence files"
    )
    solve_cmd.add_argument("--game", required=True, choices=sorted(GAME_BUILDERS))
    solve_cmd.add_argument("--algo", required=True, choices=ALGORITHMS)
    solve_cmd.add_argument("--iters", required=True, type=int)
    solve_cmd.add_argument(
        "--estimator", choices=("tabular", "tree"), default="tree"
    )
    solve_cmd.add_argument("--min-leaf", type=float, default=1.0)
    solve_cmd.add_argument("--max-depth", type=int, default=None)
    solve_cmd.add_argument(
        "--target-mode", choices=("exact", "bootstrap"), default="exact"
    )
    solve_cmd.add_argument("--seed", type=int, default=0)
    solve_cmd.add_argument("--log-every", type=int, default=1)
    solve_cmd.add_argument("--out", required=True)
    solve_cmd.set_defaults(func=cmd_solve)

    exploit_cmd = commands.add_parser(
        "exploit", help="print the exploitability of a stored strategy"
    )
    exploit_cmd.add_argument("--game", required=True, choices=sorted(GAME_BUILDERS))
    exploit_cmd.add_argument("--strategy", required=True)
    exploit_cmd.set_defaults(func=cmd_exploit)

    compete_cmd = commands.add_parser(
        "compete", help="play two stored strategies against each other"
    )
    compete_cmd.add_argument("--game", required=True, choices=sorted(GAME_BUILDERS))
    compete_cmd.add_argument("--a", required=True)
    compete_cmd.add_argument("--b", required=True)
    compete_cmd.add_argument("--hands", type=int, default=10000)
    compete_cmd.add_argument("--seed", type=int, default=0)
    compete_cmd.add_argument("--duplicate", action="store_true")
    compete_cmd.add_argument("--exact", action="store_true")
    compete_cmd.set_defaults(func=cmd_compete)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except OSError as exc:
        print(f"fregret: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError) as exc:
        message = exc.args[0] if exc.args else exc
        print(f"fregret: {message}", file=sys.stderr)
        return 4


def entry() -> None:
    sys.exit(main())
