"""Game definitions: extensive-form trees plus small matrix games."""

from ..efg_core import (
    CHANCE,
    DECISION,
    TERMINAL,
    GameNode,
    GameSpec,
    chance,
    check_perfect_recall,
    decision,
    enumerate_infosets,
    expected_value,
    make_game,
    reach_traverse,
    terminal,
    uniform_profile,
)
from .kuhn import build_kuhn
from .leduc import build_leduc
from .matrix import MatrixGame, build_matrix

__all__ = [
    "CHANCE",
    "DECISION",
    "TERMINAL",
    "GameNode",
    "GameSpec",
    "MatrixGame",
    "build_kuhn",
    "build_leduc",
    "build_matrix",
    "chance",
    "check_perfect_recall",
    "decision",
    "enumerate_infosets",
    "expected_value",
    "make_game",
    "reach_traverse",
    "terminal",
    "uniform_profile",
]
