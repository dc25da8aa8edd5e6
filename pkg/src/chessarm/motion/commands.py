"""The 9-character move-command codec and path obstruction analysis.

A command is four square characters followed by five flag characters in the
fixed order jump, capture, castling, en-passant, promotion, e.g. a knight
hop from the starting position encodes as "g1f310000".  The promotion slot
carries the promoted piece letter (q/r/b/n) instead of '1' so the command
stays self-contained; '0' fills every unset slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from functools import lru_cache

from ..board.core import GameState, Move, PieceKind, Placement, Square
from ..board.moves import IllegalMove, is_legal

_CASTLING_PAIRS = {("e1", "g1"), ("e1", "c1"), ("e8", "g8"), ("e8", "c8")}


class MalformedCommand(ValueError):
    pass


@dataclass(frozen=True)
class MoveCommand:
    from_sq: Square
    to_sq: Square
    jump: bool = False
    capture: bool = False
    castling: bool = False
    en_passant: bool = False
    promotion: Optional[PieceKind] = None

    def __post_init__(self):
        if self.castling and (self.from_sq.name, self.to_sq.name) not in _CASTLING_PAIRS:
            raise ValueError(
                f"{self.from_sq.name}{self.to_sq.name} is not a castling king pair"
            )

    @property
    def text(self) -> str:
        flags = [
            "1" if self.jump else "0",
            "1" if self.capture else "0",
            "1" if self.castling else "0",
            "1" if self.en_passant else "0",
            self.promotion.value if self.promotion else "0",
        ]
        return self.from_sq.name + self.to_sq.name + "".join(flags)


@lru_cache(maxsize=4096)
def _segment_cells(from_sq: Square, to_sq: Square) -> frozenset:
    """Cells whose interior the open center-to-center segment passes through.

    Crossing parameters with the unit grid are collected and the segment is
    sampled at the midpoint of each span, so touching a cell only at a
    corner or edge never counts.
    """
    ax, ay = from_sq.file + 0.5, from_sq.rank + 0.5
    bx, by = to_sq.file + 0.5, to_sq.rank + 0.5
    dx, dy = bx - ax, by - ay
    cuts = {0.0, 1.0}
    for grid in range(9):
        if abs(dx) > 1e-12:
            t = (grid - ax) / dx
            if 0.0 < t < 1.0:
                cuts.add(t)
        if abs(dy) > 1e-12:
            t = (grid - ay) / dy
            if 0.0 < t < 1.0:
                cuts.add(t)
    cells = set()
    ordered = sorted(cuts)
    for lo, hi in zip(ordered, ordered[1:]):
        t = (lo + hi) / 2.0
        file = int(ax + t * dx)
        rank = int(ay + t * dy)
        if 0 <= file <= 7 and 0 <= rank <= 7:
            cells.add((file, rank))
    cells.discard((from_sq.file, from_sq.rank))
    cells.discard((to_sq.file, to_sq.rank))
    return frozenset(cells)


def path_obstructed(placement: Placement, from_sq: Square, to_sq: Square) -> bool:
    """True when sliding between the square centers would hit another piece."""
    if from_sq == to_sq:
        raise ValueError("path needs two distinct squares")
    return any(
        placement.cells[rank * 8 + file] is not None
        for file, rank in _segment_cells(from_sq, to_sq)
    )


def encode_move(move: Move, state: GameState) -> str:
    """Encode a legal move as the 9-character command text.

    Knights always jump; other pieces jump exactly when their straight
    path is obstructed in the current placement.
    """
    if not is_legal(state, move):
        raise IllegalMove(f"{move.uci} is not legal here")
    piece = state.placement.at(move.from_sq)
    jump = piece.kind is PieceKind.KNIGHT or path_obstructed(
        state.placement, move.from_sq, move.to_sq
    )
    return MoveCommand(
        move.from_sq,
        move.to_sq,
        jump=jump,
        capture=move.capture,
        castling=move.castling,
        en_passant=move.en_passant,
        promotion=move.promotion,
    ).text


def decode_move(text: str) -> MoveCommand:
    """Parse a 9-character command; the inverse of encode_move."""
    if not isinstance(text, str) or len(text) != 9:
        raise MalformedCommand(f"command must be 9 characters, got {text!r}")
    try:
        from_sq = Square.from_name(text[0:2])
        to_sq = Square.from_name(text[2:4])
    except ValueError as exc:
        raise MalformedCommand(str(exc)) from None
    flags = text[4:9]
    for ch in flags[:4]:
        if ch not in "01":
            raise MalformedCommand(f"bad flag character {ch!r} in {text!r}")
    promo = None
    if flags[4] != "0":
        if flags[4] not in "qrbn":
            raise MalformedCommand(f"bad promotion character {flags[4]!r}")
        promo = PieceKind(flags[4])
    try:
        return MoveCommand(
            from_sq,
            to_sq,
            jump=flags[0] == "1",
            capture=flags[1] == "1",
            castling=flags[2] == "1",
            en_passant=flags[3] == "1",
            promotion=promo,
        )
    except ValueError as exc:
        raise MalformedCommand(str(exc)) from None
