"""Bundled example models: the small fixtures used across the test suite
and a reconstructed four-cell board game.
"""

from __future__ import annotations

from .model import Model, kripke


def chain() -> Model:
    """Three closed states a -> b -> c with p: tt,tt,ff and q: ff,ff,tt."""
    return kripke(
        ["a", "b", "c"],
        [("a", "b"), ("b", "c")],
        {
            "p": {"a": True, "b": True, "c": False},
            "q": {"a": False, "b": False, "c": True},
        },
    )


def loop() -> Model:
    """A single closed state with a self-loop and p tt."""
    return kripke(["s"], [("s", "s")], {"p": {"s": True}})


def dead() -> Model:
    """A single closed deadlock state with p tt."""
    return kripke(["t"], [], {"p": {"t": True}})


def game_board() -> Model:
    """State space of a four-cell board game.

    The player alternates between throwing a two-sided die and moving the
    pawn forward by the number of eyes, wrapping around the board.  Cell 1
    loses the game, cell 3 wins it; both end it.  States are either
    throw-states (trw) or move-states showing the die (d1/d2); terminal
    states carry lost/win.

    From the initial throw-state, winning requires showing a one at some
    point (a direct one from the start loses), while the d2-d2 loop keeps
    the win reachable forever without reaching it.
    """
    states = ["t0", "m01", "m02", "lost1", "t2", "m21", "m22", "win3"]
    transitions = [
        ("t0", "m01"), ("t0", "m02"),
        ("m01", "lost1"),
        ("m02", "t2"),
        ("t2", "m21"), ("t2", "m22"),
        ("m21", "win3"),
        ("m22", "t0"),
    ]
    off = {s: False for s in states}
    props = {
        "d1": {**off, "m01": True, "m21": True},
        "d2": {**off, "m02": True, "m22": True},
        "init": {**off, "t0": True},
        "trw": {**off, "t0": True, "t2": True},
        "lost": {**off, "lost1": True},
        "win": {**off, "win3": True},
    }
    return kripke(states, transitions, props)
