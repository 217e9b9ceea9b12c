"""Kuhn poker: three cards, one ante, one betting round with a 1-chip bet.

Infoset keys follow ``p{seat}:{rank}:-:{actions}`` where rank is J/Q/K, the
public-card field is always ``-`` (there is no board), and actions is the
betting string so far over the characters f/c/r (fold, check/call, bet).
Seat 0 acts first.
"""

from __future__ import annotations

from ..efg_core import GameNode, GameSpec, chance, decision, make_game, terminal

RANK_CHARS = "JQK"


def _showdown(rank0: int, rank1: int, stake: float) -> GameNode:
    return terminal(stake if rank0 > rank1 else -stake)


def _betting(rank0: int, rank1: int, history: str) -> GameNode:
    key0 = f"p0:{RANK_CHARS[rank0]}:-:{history}"
    key1 = f"p1:{RANK_CHARS[rank1]}:-:{history}"
    if history == "":
        return decision(
            0, key0, ("c", "r"),
            (_betting(rank0, rank1, "c"), _betting(rank0, rank1, "r")),
        )
    if history == "c":
        return decision(
            1, key1, ("c", "r"),
            (_showdown(rank0, rank1, 1.0), _betting(rank0, rank1, "cr")),
        )
    if history == "r":
        # Seat 1 faces a bet: fold loses the ante, call goes to showdown for 2.
        return decision(
            1, key1, ("f", "c"),
            (terminal(1.0), _showdown(rank0, rank1, 2.0)),
        )
    if history == "cr":
        return decision(
            0, key0, ("f", "c"),
            (terminal(-1.0), _showdown(rank0, rank1, 2.0)),
        )
    raise AssertionError(history)


def build_kuhn() -> GameSpec:
    """Build the full Kuhn poker tree (6 deals, 12 infosets)."""
    deals = [(r0, r1) for r0 in range(3) for r1 in range(3) if r0 != r1]
    children = [_betting(r0, r1, "") for r0, r1 in deals]
    root = chance([1.0 / len(deals)] * len(deals), children)
    return make_game("kuhn", root)
