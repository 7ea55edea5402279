"""Python access to the ARAT homotopy solver."""

import json

from ._arat import (
    AratError,
    Game,
    Homotopy,
    enumerate_lcp,
    equivalent_lcp,
    interior_point,
    load_game,
    parse_game,
    shift_rewards,
    validate,
)
from . import _arat


def build(game):
    return json.loads(_arat.build(game))


def oracle(game):
    return json.loads(_arat.oracle(game))


def solve(game, x0=None, shift_rewards=False, restarts=3, **tracer):
    """Run the full pipeline; returns the same report as `solve --json-out`."""
    return json.loads(_arat.solve(game, x0, shift_rewards, restarts, **tracer))


__all__ = [
    "AratError", "Game", "Homotopy", "build", "enumerate_lcp",
    "equivalent_lcp", "interior_point", "load_game", "oracle", "parse_game",
    "shift_rewards", "solve", "validate",
]
