"""Tabular counterfactual regret minimization for two-player zero-sum games.

One full-width tree pass per iteration computes, for every infoset, the
opponent-and-chance weighted regret of each action against the current
policy, accumulates those into cumulative regret and strategy-sum tables,
and the normalized strategy sums converge to an approximate equilibrium.

The pass itself (``cfr_pass``) is policy-agnostic: it takes a callback
mapping infoset keys to action distributions, so the same traversal serves
both the tabular solver here and solvers that predict regrets with a fitted
model. All arithmetic is pure-Python floats in a fixed traversal order, so
repeated runs are bit-for-bit identical.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .efg_core import CHANCE, TERMINAL, GameSpec, enumerate_infosets
from .eval import exploitability
from .regret import regret_match

UPDATE_MODES = ("simultaneous", "alternating")


@dataclass
class CFRConfig:
    """Solver settings: iteration count, update scheme, and log cadence."""

    iterations: int
    update_mode: str = "simultaneous"
    log_every: int = 1

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.update_mode not in UPDATE_MODES:
            raise ValueError(
                f"update_mode must be one of {UPDATE_MODES}, "
                f"got '{self.update_mode}'"
            )
        if self.log_every < 1:
            raise ValueError("log_every must be >= 1")


@dataclass(frozen=True)
class ConvergenceRow:
    """One logged solver checkpoint."""

    t: int
    exploitability: float
    max_pos_regret_sum: float
    wall_ms: float


@dataclass
class CFRTables:
    """Cumulative regrets and strategy sums, one vector per infoset key.

    The acting seat is implied by the key (it is recorded in the game), so
    both maps are keyed by infoset alone. Regrets are stored unclipped;
    negative totals only flatten the matched policy to uniform.
    """

    game: GameSpec = field(repr=False)
    regrets: dict[str, list[float]] = field(repr=False)
    strategy_sums: dict[str, list[float]] = field(repr=False)
    iterations: int = 0


def new_tables(game: GameSpec) -> CFRTables:
    """Zero-initialized tables covering every infoset of ``game``."""
    rows = enumerate_infosets(game)
    return CFRTables(
        game=game,
        regrets={key: [0.0] * n for _, key, n in rows},
        strategy_sums={key: [0.0] * n for _, key, n in rows},
    )


def current_policy(tables: CFRTables, player: int, infoset: str):
    """Regret matching on the stored cumulative regrets of one infoset."""
    if infoset not in tables.regrets:
        raise KeyError(f"unknown infoset '{infoset}'")
    if tables.game.infoset_player[infoset] != player:
        raise ValueError(
            f"infoset '{infoset}' belongs to player "
            f"{tables.game.infoset_player[infoset]}, not {player}"
        )
    return regret_match(tables.regrets[infoset])


def cfr_pass(game: GameSpec, policy_fn, strategy_sums, update_players):
    """One full-width traversal under the policies given by ``policy_fn``.

    Every action branch is evaluated regardless of its probability. For each
    seat in ``update_players``, reach-weighted policies are added into
    ``strategy_sums`` in place and the per-infoset immediate regrets
    (opponent-and-chance weighted advantage of each action over the policy
    value) are accumulated into the returned dict. Returns
    ``(seat 0 root value, immediate regrets)``; seat 1's value is the exact
    negation.
    """
    deltas: dict[str, list[float]] = {}

    def walk(node, reach0: float, reach1: float, chance_reach: float) -> float:
        if node.kind == TERMINAL:
            return node.utilities[0]
        if node.kind == CHANCE:
            total = 0.0
            for prob, child in zip(node.chance_probs, node.children):
                total += prob * walk(child, reach0, reach1, chance_reach * prob)
            return total
        policy = policy_fn(node.infoset)
        player = node.player
        child_values = []
        node_value = 0.0
        for prob, child in zip(policy, node.children):
            if player == 0:
                value = walk(child, reach0 * prob, reach1, chance_reach)
            else:
                value = walk(child, reach0, reach1 * prob, chance_reach)
            child_values.append(value)
            node_value += prob * value
        if player in update_players:
            my_reach = reach0 if player == 0 else reach1
            counterfactual = (reach1 if player == 0 else reach0) * chance_reach
            sums = strategy_sums.setdefault(
                node.infoset, [0.0] * len(policy)
            )
            vec = deltas.setdefault(node.infoset, [0.0] * len(policy))
            if player == 0:
                for a, prob in enumerate(policy):
                    sums[a] += my_reach * prob
                    vec[a] += counterfactual * (child_values[a] - node_value)
            else:
                # Seat 1's value is the negation, so the advantage flips sign.
                for a, prob in enumerate(policy):
                    sums[a] += my_reach * prob
                    vec[a] += counterfactual * (node_value - child_values[a])
        return node_value

    root_value = walk(game.root, 1.0, 1.0, 1.0)
    return root_value, deltas


def _table_policy_fn(tables: CFRTables):
    """Policy callback over the tables, cached for one traversal."""
    cache: dict[str, tuple[float, ...]] = {}
    regrets = tables.regrets

    def policy_fn(infoset: str):
        policy = cache.get(infoset)
        if policy is None:
            policy = regret_match(regrets[infoset])
            cache[infoset] = policy
        return policy

    return policy_fn


def _merge_deltas(regrets, deltas) -> None:
    for infoset, vec in deltas.items():
        row = regrets[infoset]
        for a, value in enumerate(vec):
            row[a] += value


def cfr_iteration(game: GameSpec, tables: CFRTables):
    """One simultaneous update of both seats; returns the immediate regrets."""
    _, deltas = cfr_pass(game, _table_policy_fn(tables), tables.strategy_sums, (0, 1))
    _merge_deltas(tables.regrets, deltas)
    tables.iterations += 1
    return deltas


def cfr_iteration_alternating(game: GameSpec, tables: CFRTables):
    """One alternating update (seat 0's pass, then seat 1's against it).

    Seat 1's pass already sees seat 0's refreshed regrets. Returns the
    combined immediate regrets keyed by infoset (the key sets are disjoint).
    """
    combined: dict[str, list[float]] = {}
    for player in (0, 1):
        _, deltas = cfr_pass(
            game, _table_policy_fn(tables), tables.strategy_sums, (player,)
        )
        _merge_deltas(tables.regrets, deltas)
        combined.update(deltas)
    tables.iterations += 1
    return combined


def average_from_sums(strategy_sums) -> dict[str, tuple[float, ...]]:
    """Normalized strategy sums; infosets with zero mass fall back to uniform."""
    profile: dict[str, tuple[float, ...]] = {}
    for key, sums in strategy_sums.items():
        total = sum(sums)
        if total > 0.0:
            profile[key] = tuple(s / total for s in sums)
        else:
            profile[key] = (1.0 / len(sums),) * len(sums)
    return profile


def average_strategy(tables: CFRTables) -> dict[str, tuple[float, ...]]:
    """Average strategy profile of the tables (normalized strategy sums)."""
    return average_from_sums(tables.strategy_sums)


def max_positive_regret_sum(tables: CFRTables) -> float:
    """Sum over all infosets of the clipped-at-zero maximum cumulative regret.

    Divided by the iteration count this upper-bounds the exploitability of
    the average strategy.
    """
    return sum(max(0.0, max(row)) for row in tables.regrets.values())


def solve(game: GameSpec, config: CFRConfig):
    """Run CFR and return (average strategy profile, convergence log).

    Logs every ``config.log_every`` iterations and always at the final one:
    iteration number, exploitability of the running average strategy, the
    positive-regret bound numerator, and elapsed wall-clock milliseconds.
    Everything except the timing column is deterministic.
    """
    tables = new_tables(game)
    step = (
        cfr_iteration
        if config.update_mode == "simultaneous"
        else cfr_iteration_alternating
    )
    log: list[ConvergenceRow] = []
    start = time.perf_counter()
    for t in range(1, config.iterations + 1):
        step(game, tables)
        if t % config.log_every == 0 or t == config.iterations:
            log.append(
                ConvergenceRow(
                    t=t,
                    exploitability=exploitability(game, average_strategy(tables)),
                    max_pos_regret_sum=max_positive_regret_sum(tables),
                    wall_ms=(time.perf_counter() - start) * 1000.0,
                )
            )
    return average_strategy(tables), log
