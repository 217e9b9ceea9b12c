"""Best response, exploitability, and head-to-head match evaluation.

Exploitability here is the SUM of both seats' best-response values (zero
exactly at an equilibrium); halve it to compare against per-player-average
conventions. Matches report chips per hand from the first profile's view.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass

from .efg_core import CHANCE, TERMINAL, GameSpec, expected_value


@dataclass(frozen=True)
class BestResponseResult:
    """Best achievable value for one seat against a fixed opponent."""

    value: float
    response: dict[str, tuple[float, ...]]
    responder: int


@dataclass(frozen=True)
class MatchResult:
    """Outcome of a sampled head-to-head match."""

    hands: int
    mean: float
    stderr: float
    seed: int
    duplicate: bool


def _opponent_policy(profile, node):
    try:
        probs = profile[node.infoset]
    except KeyError:
        raise KeyError(f"profile missing infoset '{node.infoset}'") from None
    if len(probs) != len(node.actions):
        raise ValueError(
            f"profile entry for '{node.infoset}' has {len(probs)} "
            f"probabilities for {len(node.actions)} actions"
        )
    return probs


def best_response(
    game: GameSpec, opponent_profile, responder: int
) -> BestResponseResult:
    """Exact best response for ``responder`` against ``opponent_profile``.

    Dynamic programming over the tree: at each responder infoset pick the
    action maximizing the opponent-and-chance-reach-weighted sum of child
    values (ties to the lowest action index). Only the opponent's infosets
    are read from the profile. Responder infosets the opponent's play makes
    unreachable get a uniform row in the returned response; any choice there
    is value-neutral.
    """
    if responder not in (0, 1):
        raise ValueError("responder must be 0 or 1")
    members: dict[str, list[tuple[object, float]]] = {}

    def collect(node, weight):
        if node.kind == TERMINAL:
            return
        if node.kind == CHANCE:
            for prob, child in zip(node.chance_probs, node.children):
                collect(child, weight * prob)
            return
        if node.player == responder:
            members.setdefault(node.infoset, []).append((node, weight))
            for child in node.children:
                collect(child, weight)
        else:
            probs = _opponent_policy(opponent_profile, node)
            for prob, child in zip(probs, node.children):
                collect(child, weight * prob)

    collect(game.root, 1.0)

    value_memo: dict[int, float] = {}
    choice_memo: dict[str, int] = {}

    def value_of(node) -> float:
        cached = value_memo.get(id(node))
        if cached is not None:
            return cached
        if node.kind == TERMINAL:
            result = node.utilities[responder]
        elif node.kind == CHANCE:
            result = sum(
                prob * value_of(child)
                for prob, child in zip(node.chance_probs, node.children)
            )
        elif node.player == responder:
            result = value_of(node.children[choose(node.infoset)])
        else:
            probs = _opponent_policy(opponent_profile, node)
            result = sum(
                prob * value_of(child)
                for prob, child in zip(probs, node.children)
            )
        value_memo[id(node)] = result
        return result

    def choose(infoset: str) -> int:
        cached = choice_memo.get(infoset)
        if cached is not None:
            return cached
        rows = members[infoset]
        n_actions = len(rows[0][0].actions)
        best_action = 0
        best_score = None
        for action in range(n_actions):
            score = sum(w * value_of(node.children[action]) for node, w in rows)
            if best_score is None or score > best_score:
                best_score = score
                best_action = action
        choice_memo[infoset] = best_action
        return best_action

    total = value_of(game.root)
    response: dict[str, tuple[float, ...]] = {}
    for infoset, rows in members.items():
        n_actions = len(rows[0][0].actions)
        if sum(w for _, w in rows) > 0.0:
            picked = choose(infoset)
            response[infoset] = tuple(
                1.0 if a == picked else 0.0 for a in range(n_actions)
            )
        else:
            response[infoset] = (1.0 / n_actions,) * n_actions
    return BestResponseResult(value=total, response=response, responder=responder)


def exploitability(game: GameSpec, profile) -> float:
    """Sum of both seats' best-response values; 0 exactly at an equilibrium."""
    return (
        best_response(game, profile, 0).value
        + best_response(game, profile, 1).value
    )


def merge_profiles(game: GameSpec, seat0_profile, seat1_profile):
    """Full profile taking seat-0 rows from one source, seat-1 from another."""
    merged = {}
    for infoset, player in game.infoset_player.items():
        source = seat0_profile if player == 0 else seat1_profile
        try:
            merged[infoset] = source[infoset]
        except KeyError:
            raise KeyError(f"profile missing infoset '{infoset}'") from None
    return merged


def exact_ev(game: GameSpec, profile_a, profile_b) -> float:
    """Chips per hand for profile_a, averaged over seat assignments.

    Exactly antisymmetric (exact_ev(a, b) == -exact_ev(b, a)) and exactly
    zero when both arguments are the same profile.
    """
    a_seated_first = expected_value(game, merge_profiles(game, profile_a, profile_b))
    b_seated_first = expected_value(game, merge_profiles(game, profile_b, profile_a))
    return 0.5 * (a_seated_first[0] - b_seated_first[0])


def _draw(rng: random.Random, probs) -> int:
    mark = rng.random()
    cumulative = 0.0
    for index, prob in enumerate(probs):
        cumulative += prob
        if mark < cumulative:
            return index
    return len(probs) - 1


def _play_hand(game, seat_profiles, rng, script, replay: bool) -> float:
    """One sampled hand; returns seat 0's payoff.

    Chance outcomes come from ``script`` by event order when replaying,
    falling back to fresh draws (appended to the script) past its end.
    """
    node = game.root
    event = 0
    while node.kind != TERMINAL:
        if node.kind == CHANCE:
            if replay and event < len(script):
                index = script[event]
            else:
                index = _draw(rng, node.chance_probs)
                script.append(index)
            event += 1
        else:
            probs = _opponent_policy(seat_profiles[node.player], node)
            index = _draw(rng, probs)
        node = node.children[index]
    return node.utilities[0]


def sampled_match(
    game: GameSpec,
    profile_a,
    profile_b,
    hands: int,
    seed: int = 0,
    duplicate: bool = False,
) -> MatchResult:
    """Seeded head-to-head match; mean is profile_a's chips per hand.

    Plain mode alternates profile_a's seat each hand. Duplicate mode plays
    hands in pairs on one recorded chance script with the seats swapped for
    the second hand (actions are resampled); scoring averages each pair,
    which cancels most deal luck. Odd hand counts round down to full pairs.
    """
    if hands < 1:
        raise ValueError("hands must be >= 1")
    rng = random.Random(seed)
    values: list[float] = []
    if duplicate:
        pairs = max(1, hands // 2)
        for _ in range(pairs):
            script: list[int] = []
            first = _play_hand(game, (profile_a, profile_b), rng, script, False)
            second = _play_hand(game, (profile_b, profile_a), rng, script, True)
            values.append(0.5 * (first - second))
        played = 2 * pairs
    else:
        for hand in range(hands):
            script = []
            if hand % 2 == 0:
                values.append(_play_hand(game, (profile_a, profile_b), rng, script, False))
            else:
                values.append(-_play_hand(game, (profile_b, profile_a), rng, script, False))
        played = hands
    mean = sum(values) / len(values)
    if len(values) >= 2:
        stderr = statistics.stdev(values) / math.sqrt(len(values))
    else:
        stderr = 0.0
    return MatchResult(
        hands=played, mean=mean, stderr=stderr, seed=seed, duplicate=duplicate
    )
