"""Leduc Hold'em: 6-card deck (J/Q/K in two suits), two betting rounds.

Rules pinned here: each player antes 1 chip; round 1 allows bets/raises of 2
chips, round 2 of 4 chips; at most two wagers per round (a bet and one raise);
seat 0 acts first in both rounds. One board card is dealt between rounds. At
showdown a private rank pairing the board wins, otherwise the higher private
rank wins, and equal ranks split the pot.

Infoset keys follow ``p{seat}:{rank}:{board|-}:{round1}/{round2}`` with action
characters f/c/r. Suits are dealt (they shape the deck) but never appear in
keys, since showdown ignores them.
"""

from __future__ import annotations

from ..efg_core import GameNode, GameSpec, chance, decision, make_game, terminal

RANK_CHARS = "JQK"
ANTE = 1.0
BET_SIZES = (2.0, 4.0)
DECK = tuple((rank, suit) for rank in range(3) for suit in range(2))


def _round_actions(seq: str):
    """Legal actions at the current point of one betting round, or None if the
    round is over. Wagers are capped at two per round."""
    raises = seq.count("r")
    if seq == "" or seq == "c":
        return ("c", "r")
    if seq.endswith("f"):
        return None
    if seq.endswith("c") and len(seq) >= 2:
        return None  # call or check-around closed the round
    # Facing a bet or raise.
    return ("f", "c") if raises >= 2 else ("f", "c", "r")


def _round_over(seq: str) -> bool:
    return _round_actions(seq) is None


def _contribs(seq: str, size: float) -> tuple[float, float]:
    """Chips each seat put into the pot during one round's action string."""
    paid = [0.0, 0.0]
    actor = 0
    for ch in seq:
        if ch == "c":
            paid[actor] = paid[1 - actor]
        elif ch == "r":
            paid[actor] = paid[1 - actor] + size
        actor = 1 - actor
    return paid[0], paid[1]


def _to_act(seq: str) -> int:
    return len(seq) % 2


def _winner_sign(rank0: int, rank1: int, board_rank: int) -> float:
    if rank0 == board_rank:
        return 1.0
    if rank1 == board_rank:
        return -1.0
    if rank0 == rank1:
        return 0.0
    return 1.0 if rank0 > rank1 else -1.0


def _fold_utility(folder: int, stakes: tuple[float, float]) -> float:
    return -stakes[0] if folder == 0 else stakes[1]


def _total_stakes(r1: str, r2: str) -> tuple[float, float]:
    a0, a1 = _contribs(r1, BET_SIZES[0])
    b0, b1 = _contribs(r2, BET_SIZES[1])
    return ANTE + a0 + b0, ANTE + a1 + b1


def _round2(deal, board, r1: str, r2: str) -> GameNode:
    rank0, rank1 = deal[0][0], deal[1][0]
    board_char = RANK_CHARS[board[0]]
    if r2.endswith("f"):
        folder = _to_act(r2[:-1])
        return terminal(_fold_utility(folder, _total_stakes(r1, r2)))
    if _round_over(r2):
        stake = _total_stakes(r1, r2)[0]  # equal for both seats at showdown
        return terminal(_winner_sign(rank0, rank1, board[0]) * stake)
    seat = _to_act(r2)
    rank_char = RANK_CHARS[deal[seat][0]]
    key = f"p{seat}:{rank_char}:{board_char}:{r1}/{r2}"
    actions = _round_actions(r2)
    children = [_round2(deal, board, r1, r2 + a) for a in actions]
    return decision(seat, key, actions, children)


def _deal_board(deal, r1: str) -> GameNode:
    remaining = [card for card in DECK if card not in deal]
    children = [_round2(deal, board, r1, "") for board in remaining]
    return chance([1.0 / len(remaining)] * len(remaining), children)


def _round1(deal, r1: str) -> GameNode:
    if r1.endswith("f"):
        folder = _to_act(r1[:-1])
        return terminal(_fold_utility(folder, _total_stakes(r1, "")))
    if _round_over(r1):
        return _deal_board(deal, r1)
    seat = _to_act(r1)
    rank_char = RANK_CHARS[deal[seat][0]]
    key = f"p{seat}:{rank_char}:-:{r1}/"
    actions = _round_actions(r1)
    children = [_round1(deal, r1 + a) for a in actions]
    return decision(seat, key, actions, children)


def build_leduc() -> GameSpec:
    """Build the full Leduc Hold'em tree (120 deals, 288 infosets)."""
    deals = [(c0, c1) for c0 in DECK for c1 in DECK if c0 != c1]
    children = [_round1(deal, "") for deal in deals]
    root = chance([1.0 / len(deals)] * len(deals), children)
    return make_game("leduc", root)
