"""SAN rendering/parsing, numbered history lines, and minimal PGN I/O."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .core import (
    GameState,
    Move,
    PieceKind,
    Square,
    STANDARD_START_FEN,
    parse_fen,
)
from .moves import apply_move, in_check, legal_moves

_KIND_LETTER = {
    PieceKind.KNIGHT: "N",
    PieceKind.BISHOP: "B",
    PieceKind.ROOK: "R",
    PieceKind.QUEEN: "Q",
    PieceKind.KING: "K",
}
_LETTER_KIND = {v: k for k, v in _KIND_LETTER.items()}

_SAN_RE = re.compile(
    r"^(?P<piece>[KQRBN])?(?P<from_file>[a-h])?(?P<from_rank>[1-8])?"
    r"(?P<capture>x)?(?P<to>[a-h][1-8])(?:=(?P<promo>[QRBN]))?$"
)


class MalformedSan(ValueError):
    pass


def _suffix(state: GameState, move: Move) -> str:
    after = apply_move(state, move)
    if not legal_moves(after):
        return "#" if in_check(after) else ""
    return "+" if in_check(after) else ""


def san(state: GameState, move: Move) -> str:
    """Standard algebraic notation for a legal move in the given state."""
    if move.castling:
        core = "O-O" if move.to_sq.file == 6 else "O-O-O"
        return core + _suffix(state, move)
    piece = state.placement.at(move.from_sq)
    if piece is None:
        raise ValueError(f"no piece on {move.from_sq.name}")
    if piece.kind is PieceKind.PAWN:
        core = ""
        if move.capture:
            core += move.from_sq.name[0] + "x"
        core += move.to_sq.name
        if move.promotion is not None:
            core += "=" + _KIND_LETTER[move.promotion]
        return core + _suffix(state, move)

    core = _KIND_LETTER[piece.kind]
    # disambiguate against same-kind pieces that can also reach the target
    rivals = [
        m
        for m in legal_moves(state)
        if m.to_sq == move.to_sq
        and m.from_sq != move.from_sq
        and state.placement.at(m.from_sq).kind is piece.kind
    ]
    if rivals:
        same_file = any(m.from_sq.file == move.from_sq.file for m in rivals)
        same_rank = any(m.from_sq.rank == move.from_sq.rank for m in rivals)
        if not same_file:
            core += move.from_sq.name[0]
        elif not same_rank:
            core += move.from_sq.name[1]
        else:
            core += move.from_sq.name
    if move.capture:
        core += "x"
    core += move.to_sq.name
    return core + _suffix(state, move)


def parse_san(state: GameState, text: str) -> Move:
    """The legal move written in SAN, annotations ("+", "#", "!?") ignored."""
    clean = text.strip().rstrip("+#!?")
    if clean in ("O-O", "0-0"):
        candidates = [m for m in legal_moves(state) if m.castling and m.to_sq.file == 6]
        if not candidates:
            raise MalformedSan(f"{text!r}: kingside castling not legal here")
        return candidates[0]
    if clean in ("O-O-O", "0-0-0"):
        candidates = [m for m in legal_moves(state) if m.castling and m.to_sq.file == 2]
        if not candidates:
            raise MalformedSan(f"{text!r}: queenside castling not legal here")
        return candidates[0]
    m = _SAN_RE.match(clean)
    if m is None:
        raise MalformedSan(f"cannot parse SAN {text!r}")
    kind = _LETTER_KIND.get(m.group("piece"), PieceKind.PAWN)
    to_sq = Square.from_name(m.group("to"))
    promo_kind = _LETTER_KIND[m.group("promo")] if m.group("promo") else None
    candidates = []
    for move in legal_moves(state):
        piece = state.placement.at(move.from_sq)
        if piece.kind is not kind or move.to_sq != to_sq:
            continue
        if move.promotion != promo_kind:
            continue
        if m.group("from_file") and move.from_sq.name[0] != m.group("from_file"):
            continue
        if m.group("from_rank") and move.from_sq.name[1] != m.group("from_rank"):
            continue
        if kind is PieceKind.PAWN and m.group("capture") and not move.capture:
            continue
        if kind is PieceKind.PAWN and not m.group("capture") and move.capture:
            continue
        candidates.append(move)
    if not candidates:
        raise MalformedSan(f"{text!r} matches no legal move")
    if len(candidates) > 1:
        raise MalformedSan(f"{text!r} is ambiguous here")
    return candidates[0]


def _replay(state: GameState) -> Tuple[GameState, List[str]]:
    """Replay the state's history from its initial position, collecting SANs."""
    cursor = parse_fen(state.initial_fen)
    sans = []
    for move in state.history:
        sans.append(san(cursor, move))
        cursor = apply_move(cursor, move)
    return cursor, sans


def history_line(state: GameState) -> str:
    """The numbered SAN line of the game so far, e.g. "1. e4 e5 2. Nf3 Nc6"."""
    cursor = parse_fen(state.initial_fen)
    parts = []
    for move in state.history:
        if cursor.side_to_move.value == "w":
            parts.append(f"{cursor.fullmove_number}.")
        parts.append(san(cursor, move))
        cursor = apply_move(cursor, move)
    return " ".join(parts)


def history_sans(state: GameState) -> List[str]:
    return _replay(state)[1]


# --- PGN --------------------------------------------------------------------


@dataclass
class ReplayGame:
    """A parsed PGN game: where it starts, the moves, and the result tag."""

    initial_fen: str = STANDARD_START_FEN
    sans: List[str] = field(default_factory=list)
    result: str = "*"
    headers: dict = field(default_factory=dict)

    def states(self) -> List[GameState]:
        """All positions of the game, starting position included."""
        out = [parse_fen(self.initial_fen)]
        for text in self.sans:
            out.append(apply_move(out[-1], parse_san(out[-1], text)))
        return out


def export_pgn(state: GameState, result: str = "*", headers: Optional[dict] = None) -> str:
    """Render the game's history as a PGN document."""
    tags = {"Event": "?", "Site": "?", "Result": result}
    if headers:
        tags.update(headers)
    if state.initial_fen != STANDARD_START_FEN:
        tags["SetUp"] = "1"
        tags["FEN"] = state.initial_fen
    lines = [f'[{k} "{v}"]' for k, v in tags.items()]
    cursor = parse_fen(state.initial_fen)
    parts = []
    for move in state.history:
        if cursor.side_to_move.value == "w":
            parts.append(f"{cursor.fullmove_number}.")
        elif not parts:
            parts.append(f"{cursor.fullmove_number}...")
        parts.append(san(cursor, move))
        cursor = apply_move(cursor, move)
    parts.append(result)
    return "\n".join(lines) + "\n\n" + " ".join(parts) + "\n"


_TAG_RE = re.compile(r'^\[(\w+)\s+"(.*)"\]\s*$')


def import_pgn(text: str) -> ReplayGame:
    """Parse one PGN game (headers + movetext; comments and NAGs dropped)."""
    headers = {}
    movetext_lines = []
    for line in text.splitlines():
        tag = _TAG_RE.match(line.strip())
        if tag:
            headers[tag.group(1)] = tag.group(2)
        elif line.strip():
            movetext_lines.append(line.strip())
    movetext = " ".join(movetext_lines)
    movetext = re.sub(r"\{[^}]*\}", " ", movetext)  # comments
    movetext = re.sub(r"\$\d+", " ", movetext)  # NAGs
    movetext = re.sub(r"\d+\.(\.\.)?", " ", movetext)  # move numbers
    game = ReplayGame(headers=headers)
    if headers.get("FEN"):
        parse_fen(headers["FEN"])  # raises MalformedFen early
        game.initial_fen = headers["FEN"]
    game.result = headers.get("Result", "*")
    for token in movetext.split():
        if token in ("1-0", "0-1", "1/2-1/2", "*"):
            game.result = token
            break
        game.sans.append(token)
    game.states()  # validates every SAN against the rules
    return game
