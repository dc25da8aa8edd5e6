"""Legal move generation, move application, and move inference.

The generator is ray-table based with a make-and-scan legality filter.  Its
correctness oracle lives in the test suite as a separate brute-force
enumerator; the two share no code.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Optional, Union

from .core import (
    CastlingRights,
    Color,
    GameState,
    Move,
    Piece,
    PieceKind,
    Placement,
    Square,
    emit_fen,
    plausibility_check,
)


class ImplausibleState(ValueError):
    """The position breaks a rule move generation cannot work around."""


class IllegalMove(ValueError):
    pass


class AmbiguousMove(ValueError):
    """More than one legal move produces the observed placement."""


class _Sentinel:
    def __init__(self, name):
        self._name = name

    def __repr__(self):
        return self._name


#: infer_move results for "nothing changed" and "no legal explanation"
NO_MOVE = _Sentinel("NO_MOVE")
NO_MATCH = _Sentinel("NO_MATCH")

_KNIGHT_JUMPS = ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2))
_KING_STEPS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
_ROOK_DIRS = ((1, 0), (-1, 0), (0, 1), (0, -1))
_BISHOP_DIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def _on_board(file: int, rank: int) -> bool:
    return 0 <= file <= 7 and 0 <= rank <= 7


def square_attacked(cells: tuple, square: Square, by: Color) -> bool:
    """Scan outward from the square for attackers of the given color."""
    f0, r0 = square.file, square.rank
    for df, dr in _KNIGHT_JUMPS:
        f, r = f0 + df, r0 + dr
        if _on_board(f, r):
            p = cells[r * 8 + f]
            if p is not None and p.color is by and p.kind is PieceKind.KNIGHT:
                return True
    for df, dr in _KING_STEPS:
        f, r = f0 + df, r0 + dr
        if _on_board(f, r):
            p = cells[r * 8 + f]
            if p is not None and p.color is by and p.kind is PieceKind.KING:
                return True
    # pawns attack diagonally toward their advance direction
    pawn_rank = r0 - 1 if by is Color.WHITE else r0 + 1
    for f in (f0 - 1, f0 + 1):
        if _on_board(f, pawn_rank):
            p = cells[pawn_rank * 8 + f]
            if p is not None and p.color is by and p.kind is PieceKind.PAWN:
                return True
    for dirs, kinds in (
        (_ROOK_DIRS, (PieceKind.ROOK, PieceKind.QUEEN)),
        (_BISHOP_DIRS, (PieceKind.BISHOP, PieceKind.QUEEN)),
    ):
        for df, dr in dirs:
            f, r = f0 + df, r0 + dr
            while _on_board(f, r):
                p = cells[r * 8 + f]
                if p is not None:
                    if p.color is by and p.kind in kinds:
                        return True
                    break
                f += df
                r += dr
    return False


def _king_index(cells: tuple, color: Color) -> Optional[int]:
    for i, p in enumerate(cells):
        if p is not None and p.color is color and p.kind is PieceKind.KING:
            return i
    return None


def _pseudo_moves(state: GameState) -> List[Move]:
    cells = state.placement.cells
    mover = state.side_to_move
    out: List[Move] = []
    for index, piece in enumerate(cells):
        if piece is None or piece.color is not mover:
            continue
        file, rank = index % 8, index // 8
        frm = Square(file, rank)
        kind = piece.kind
        if kind is PieceKind.PAWN:
            ahead = 1 if mover is Color.WHITE else -1
            start_rank = 1 if mover is Color.WHITE else 6
            promo_rank = 7 if mover is Color.WHITE else 0

            def pawn_moves(to: Square, capture: bool, en_passant: bool = False):
                if to.rank == promo_rank:
                    for promo in (PieceKind.QUEEN, PieceKind.ROOK, PieceKind.BISHOP, PieceKind.KNIGHT):
                        out.append(Move(frm, to, promo, capture=capture))
                else:
                    out.append(Move(frm, to, capture=capture, en_passant=en_passant))

            if _on_board(file, rank + ahead) and cells[(rank + ahead) * 8 + file] is None:
                pawn_moves(Square(file, rank + ahead), capture=False)
                if rank == start_rank and cells[(rank + 2 * ahead) * 8 + file] is None:
                    out.append(Move(frm, Square(file, rank + 2 * ahead)))
            for df in (-1, 1):
                f, r = file + df, rank + ahead
                if not _on_board(f, r):
                    continue
                to = Square(f, r)
                target = cells[to.index]
                if target is not None and target.color is not mover:
                    pawn_moves(to, capture=True)
                elif target is None and state.en_passant == to:
                    pawn_moves(to, capture=True, en_passant=True)
        elif kind is PieceKind.KNIGHT or kind is PieceKind.KING:
            steps = _KNIGHT_JUMPS if kind is PieceKind.KNIGHT else _KING_STEPS
            for df, dr in steps:
                f, r = file + df, rank + dr
                if not _on_board(f, r):
                    continue
                target = cells[r * 8 + f]
                if target is None or target.color is not mover:
                    out.append(Move(frm, Square(f, r), capture=target is not None))
        else:
            dirs = {
                PieceKind.ROOK: _ROOK_DIRS,
                PieceKind.BISHOP: _BISHOP_DIRS,
                PieceKind.QUEEN: _ROOK_DIRS + _BISHOP_DIRS,
            }[kind]
            for df, dr in dirs:
                f, r = file + df, rank + dr
                while _on_board(f, r):
                    target = cells[r * 8 + f]
                    if target is None:
                        out.append(Move(frm, Square(f, r)))
                    else:
                        if target.color is not mover:
                            out.append(Move(frm, Square(f, r), capture=True))
                        break
                    f += df
                    r += dr
    return out


def _castling_moves(state: GameState) -> List[Move]:
    cells = state.placement.cells
    mover = state.side_to_move
    rights = state.castling
    base = 0 if mover is Color.WHITE else 56
    king_home = base + 4
    king = cells[king_home]
    if king is None or king.kind is not PieceKind.KING or king.color is not mover:
        return []
    if square_attacked(cells, Square.from_index(king_home), mover.other):
        return []
    out = []
    rook = Piece(PieceKind.ROOK, mover)
    kingside = rights.white_kingside if mover is Color.WHITE else rights.black_kingside
    queenside = rights.white_queenside if mover is Color.WHITE else rights.black_queenside
    if kingside and cells[base + 7] == rook:
        if all(cells[base + f] is None for f in (5, 6)) and not any(
            square_attacked(cells, Square.from_index(base + f), mover.other) for f in (5, 6)
        ):
            out.append(Move(Square(4, base // 8), Square(6, base // 8), castling=True))
    if queenside and cells[base + 0] == rook:
        if all(cells[base + f] is None for f in (1, 2, 3)) and not any(
            square_attacked(cells, Square.from_index(base + f), mover.other) for f in (2, 3)
        ):
            out.append(Move(Square(4, base // 8), Square(2, base // 8), castling=True))
    return out


def _moved_cells(cells: tuple, move: Move, mover: Color) -> tuple:
    """The cell grid after playing the move, with no metadata bookkeeping."""
    new = list(cells)
    piece = new[move.from_sq.index]
    if move.en_passant:
        captured_rank = move.to_sq.rank - 1 if mover is Color.WHITE else move.to_sq.rank + 1
        new[captured_rank * 8 + move.to_sq.file] = None
    if move.castling:
        base = move.from_sq.rank * 8
        if move.to_sq.file == 6:
            new[base + 5], new[base + 7] = new[base + 7], None
        else:
            new[base + 3], new[base + 0] = new[base + 0], None
    if move.promotion is not None:
        piece = Piece(move.promotion, mover)
    new[move.to_sq.index] = piece
    new[move.from_sq.index] = None
    return tuple(new)


def legal_moves(state: GameState) -> List[Move]:
    """Every legal move, including castling, en passant, and promotions.

    Raises ImplausibleState when either king is missing or duplicated.
    Results are memoized on the position (history plays no part in move
    legality), which keeps per-move validation cheap for bulk callers.
    """
    return list(_legal_moves_cached(state))


@lru_cache(maxsize=8192)
def _legal_moves_cached(state: GameState) -> tuple:
    cells = state.placement.cells
    for color in Color:
        kings = sum(
            1 for p in cells if p is not None and p.color is color and p.kind is PieceKind.KING
        )
        if kings != 1:
            raise ImplausibleState(
                f"{color.value}: expected exactly one king, found {kings}"
            )
    mover = state.side_to_move
    out = []
    for move in _pseudo_moves(state):
        after = _moved_cells(cells, move, mover)
        king = _king_index(after, mover)
        if not square_attacked(after, Square.from_index(king), mover.other):
            out.append(move)
    out.extend(_castling_moves(state))
    return tuple(out)


def _apply_unchecked(state: GameState, move: Move) -> GameState:
    """Successor construction with no legality validation; callers must pass
    a move produced by legal_moves for this state."""
    mover = state.side_to_move
    cells = _moved_cells(state.placement.cells, move, mover)
    piece = state.placement.at(move.from_sq)

    ep = None
    if piece.kind is PieceKind.PAWN and abs(move.to_sq.rank - move.from_sq.rank) == 2:
        ep = Square(move.from_sq.file, (move.from_sq.rank + move.to_sq.rank) // 2)

    rights = state.castling
    touched = {move.from_sq.index, move.to_sq.index}
    rights = CastlingRights(
        rights.white_kingside and not touched & {4, 7},
        rights.white_queenside and not touched & {4, 0},
        rights.black_kingside and not touched & {60, 63},
        rights.black_queenside and not touched & {60, 56},
    )

    halfmove = 0 if (piece.kind is PieceKind.PAWN or move.capture) else state.halfmove_clock + 1
    fullmove = state.fullmove_number + (1 if mover is Color.BLACK else 0)
    nxt = GameState(
        Placement(cells),
        mover.other,
        rights,
        ep,
        halfmove,
        fullmove,
        history=state.history + (move,),
        initial_fen=state.initial_fen,
    )
    object.__setattr__(nxt, "repetition_keys", state.repetition_keys + (nxt.position_key(),))
    return nxt


@lru_cache(maxsize=8192)
def _legal_move_set(state: GameState) -> frozenset:
    return frozenset(_legal_moves_cached(state))


def is_legal(state: GameState, move: Move) -> bool:
    return move in _legal_move_set(state)


def apply_move(state: GameState, move: Move) -> GameState:
    """The successor state; raises IllegalMove when the move is not legal."""
    if is_legal(state, move):
        return _apply_unchecked(state, move)
    legal = legal_moves(state)
    if move not in legal:
        # accept a caller-built move that matches a legal one by squares+promo
        matches = [
            m
            for m in legal
            if m.from_sq == move.from_sq
            and m.to_sq == move.to_sq
            and m.promotion == move.promotion
        ]
        if not matches:
            raise IllegalMove(f"{move.uci} is not legal in {emit_fen(state)}")
        move = matches[0]
    return _apply_unchecked(state, move)


def resolve_uci(state: GameState, text: str) -> Move:
    """Find the legal move written in coordinate notation, e.g. "e2e4"."""
    text = text.strip().lower()
    for move in legal_moves(state):
        if move.uci == text:
            return move
    raise IllegalMove(f"{text!r} is not legal in {emit_fen(state)}")


def infer_move(prev: GameState, observed: Placement) -> Union[Move, _Sentinel]:
    """Explain an observed placement as a move from the previous state.

    Returns NO_MOVE when nothing changed, the unique matching legal move,
    or NO_MATCH when no legal move produces the observation.  Raises
    AmbiguousMove when several do, which signals a perception fault.
    """
    report = plausibility_check(prev.placement, "gameplay")
    if not report.ok:
        raise ImplausibleState(f"previous state implausible: {report.violations}")
    if observed == prev.placement:
        return NO_MOVE
    matches = [
        m
        for m in legal_moves(prev)
        if _moved_cells(prev.placement.cells, m, prev.side_to_move) == observed.cells
    ]
    if not matches:
        return NO_MATCH
    if len(matches) > 1:
        raise AmbiguousMove(f"{len(matches)} legal moves match the observation")
    return matches[0]


# --- termination ------------------------------------------------------------


def in_check(state: GameState) -> bool:
    king = _king_index(state.placement.cells, state.side_to_move)
    if king is None:
        raise ImplausibleState("no king to check")
    return square_attacked(state.placement.cells, Square.from_index(king), state.side_to_move.other)


def is_checkmate(state: GameState) -> bool:
    return in_check(state) and not legal_moves(state)


def is_stalemate(state: GameState) -> bool:
    return not in_check(state) and not legal_moves(state)


def is_draw_by_repetition(state: GameState) -> bool:
    return state.repetition_keys.count(state.position_key()) >= 3


def is_draw_by_fifty_moves(state: GameState) -> bool:
    return state.halfmove_clock >= 100


def game_result(state: GameState) -> Optional[str]:
    """"1-0", "0-1", "1/2-1/2", or None while the game is still on."""
    if is_draw_by_repetition(state) or is_draw_by_fifty_moves(state):
        return "1/2-1/2"
    if legal_moves(state):
        return None
    if in_check(state):
        return "0-1" if state.side_to_move is Color.WHITE else "1-0"
    return "1/2-1/2"
