"""Chess position core: types, FEN, move generation, notation, transforms."""

from .core import (
    ALL_PIECES,
    ALL_SQUARES,
    CastlingRights,
    Color,
    GameState,
    MalformedFen,
    Move,
    Piece,
    PieceKind,
    Placement,
    PlausibilityReport,
    STANDARD_START_FEN,
    Square,
    emit_fen,
    parse_fen,
    plausibility_check,
    standard_start,
)
from .moves import (
    AmbiguousMove,
    IllegalMove,
    ImplausibleState,
    NO_MATCH,
    NO_MOVE,
    apply_move,
    game_result,
    in_check,
    infer_move,
    is_checkmate,
    is_draw_by_fifty_moves,
    is_draw_by_repetition,
    is_stalemate,
    legal_moves,
    resolve_uci,
    square_attacked,
)
from .notation import (
    MalformedSan,
    ReplayGame,
    export_pgn,
    history_line,
    history_sans,
    import_pgn,
    parse_san,
    san,
)
from .transforms import shift_placement

__all__ = [
    "ALL_PIECES",
    "ALL_SQUARES",
    "AmbiguousMove",
    "CastlingRights",
    "Color",
    "GameState",
    "IllegalMove",
    "ImplausibleState",
    "MalformedFen",
    "MalformedSan",
    "Move",
    "NO_MATCH",
    "NO_MOVE",
    "Piece",
    "PieceKind",
    "Placement",
    "PlausibilityReport",
    "ReplayGame",
    "STANDARD_START_FEN",
    "Square",
    "apply_move",
    "emit_fen",
    "export_pgn",
    "game_result",
    "history_line",
    "history_sans",
    "import_pgn",
    "in_check",
    "infer_move",
    "is_checkmate",
    "is_draw_by_fifty_moves",
    "is_draw_by_repetition",
    "is_stalemate",
    "legal_moves",
    "parse_fen",
    "parse_san",
    "plausibility_check",
    "resolve_uci",
    "san",
    "shift_placement",
    "square_attacked",
    "standard_start",
]
