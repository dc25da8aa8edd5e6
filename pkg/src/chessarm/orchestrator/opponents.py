"""Opponents that stand in for the human side of the table."""

from __future__ import annotations

from typing import List, Optional

from ..board.core import GameState, Move
from ..board.moves import IllegalMove, resolve_uci
from ..board.notation import MalformedSan, parse_san
from ..engine.uci import EngineSession


def resolve_move_text(state: GameState, text: str) -> Move:
    """Accept a move as either coordinate notation or SAN."""
    try:
        return resolve_uci(state, text)
    except IllegalMove:
        try:
            return parse_san(state, text)
        except MalformedSan:
            raise IllegalMove(f"{text!r} is not a legal move here") from None


class ScriptedOpponent:
    """Plays a fixed move list; returns None when the script runs out."""

    def __init__(self, moves: List[str]):
        self.moves = list(moves)
        self._cursor = 0

    def next_move(self, state: GameState) -> Optional[Move]:
        if self._cursor >= len(self.moves):
            return None
        move = resolve_move_text(state, self.moves[self._cursor])
        self._cursor += 1
        return move


class EngineOpponent:
    """Plays whatever its own engine session recommends."""

    def __init__(self, session: EngineSession, depth: int = 6):
        self.session = session
        self.depth = depth

    def next_move(self, state: GameState) -> Optional[Move]:
        from ..board.core import emit_fen

        lines = self.session.analyse(emit_fen(state), depth=self.depth, multipv=1)
        return lines[0].move
