"""Position representation, FEN codec, and placement plausibility rules.

Two kinds of board value live here.  A Placement is a bare 64-cell grid with
no game semantics, so deliberately broken layouts used for data collection
(four kings, 32 pawns) parse and emit fine.  A GameState is a full position
with side to move, castling rights, en-passant target, clocks, and the move
history that produced it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

FILE_NAMES = "abcdefgh"
STANDARD_START_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


class MalformedFen(ValueError):
    """Raised when a FEN string cannot be parsed."""


class Color(enum.Enum):
    WHITE = "w"
    BLACK = "b"

    @property
    def other(self) -> "Color":
        return Color.BLACK if self is Color.WHITE else Color.WHITE


class PieceKind(enum.Enum):
    PAWN = "p"
    KNIGHT = "n"
    BISHOP = "b"
    ROOK = "r"
    QUEEN = "q"
    KING = "k"


@dataclass(frozen=True)
class Piece:
    kind: PieceKind
    color: Color

    def __hash__(self):
        # hot path: placements hash all their pieces; enum hashing is slow
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = hash((self.kind.value, self.color.value))
            object.__setattr__(self, "_hash", cached)
        return cached

    @property
    def letter(self) -> str:
        """FEN letter: upper-case for white, lower-case for black."""
        ch = self.kind.value
        return ch.upper() if self.color is Color.WHITE else ch

    @classmethod
    def from_letter(cls, ch: str) -> "Piece":
        try:
            kind = PieceKind(ch.lower())
        except ValueError:
            raise MalformedFen(f"unknown piece letter {ch!r}") from None
        return cls(kind, Color.WHITE if ch.isupper() else Color.BLACK)


ALL_PIECES = tuple(
    Piece(kind, color) for color in Color for kind in PieceKind
)


@dataclass(frozen=True, order=True)
class Square:
    file: int
    rank: int

    def __post_init__(self):
        if not (0 <= self.file <= 7 and 0 <= self.rank <= 7):
            raise ValueError(f"square indices out of range: {self.file},{self.rank}")

    @property
    def name(self) -> str:
        return FILE_NAMES[self.file] + str(self.rank + 1)

    @property
    def index(self) -> int:
        return self.rank * 8 + self.file

    @classmethod
    def from_name(cls, name: str) -> "Square":
        if len(name) != 2 or name[0] not in FILE_NAMES or name[1] not in "12345678":
            raise ValueError(f"bad square name {name!r}")
        return cls(FILE_NAMES.index(name[0]), int(name[1]) - 1)

    @classmethod
    def from_index(cls, index: int) -> "Square":
        return cls(index % 8, index // 8)


ALL_SQUARES = tuple(Square.from_index(i) for i in range(64))


@dataclass(frozen=True)
class Move:
    """A move plus the flags the motion encoder needs downstream."""

    from_sq: Square
    to_sq: Square
    promotion: Optional[PieceKind] = None
    capture: bool = False
    castling: bool = False
    en_passant: bool = False

    def __post_init__(self):
        if self.from_sq == self.to_sq:
            raise ValueError("move from and to squares must differ")
        if self.promotion is not None and self.to_sq.rank not in (0, 7):
            raise ValueError("promotion only on the back ranks")

    def __hash__(self):
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = hash(
                (
                    self.from_sq.index,
                    self.to_sq.index,
                    self.promotion.value if self.promotion else "",
                    self.capture,
                    self.castling,
                    self.en_passant,
                )
            )
            object.__setattr__(self, "_hash", cached)
        return cached

    @property
    def uci(self) -> str:
        suffix = self.promotion.value if self.promotion else ""
        return self.from_sq.name + self.to_sq.name + suffix


@dataclass(frozen=True)
class Placement:
    """An immutable 64-slot grid of optional pieces, index = rank*8 + file."""

    cells: tuple

    def __post_init__(self):
        if len(self.cells) != 64:
            raise ValueError("placement needs exactly 64 cells")
        for cell in self.cells:
            if cell is not None and not isinstance(cell, Piece):
                raise TypeError(f"cell must be Piece or None, got {cell!r}")

    @classmethod
    def empty(cls) -> "Placement":
        return cls((None,) * 64)

    def at(self, square: Square) -> Optional[Piece]:
        return self.cells[square.index]

    def with_cells(self, changes: dict) -> "Placement":
        """A copy with cells replaced; changes maps index -> Piece or None."""
        cells = list(self.cells)
        for index, piece in changes.items():
            cells[index] = piece
        return Placement(tuple(cells))

    def occupied(self) -> Iterable[tuple]:
        """(index, piece) pairs for occupied cells."""
        return ((i, p) for i, p in enumerate(self.cells) if p is not None)

    def count(self, piece: Piece) -> int:
        return sum(1 for p in self.cells if p == piece)

    def board_fen(self) -> str:
        rows = []
        for rank in range(7, -1, -1):
            row, run = "", 0
            for file in range(8):
                piece = self.cells[rank * 8 + file]
                if piece is None:
                    run += 1
                else:
                    if run:
                        row += str(run)
                        run = 0
                    row += piece.letter
            if run:
                row += str(run)
            rows.append(row)
        return "/".join(rows)

    @classmethod
    def from_board_fen(cls, text: str) -> "Placement":
        rows = text.split("/")
        if len(rows) != 8:
            raise MalformedFen(f"expected 8 ranks, got {len(rows)}")
        cells = [None] * 64
        for i, row in enumerate(rows):
            rank = 7 - i
            file = 0
            for ch in row:
                if ch.isdigit():
                    if ch == "0":
                        raise MalformedFen("zero-length empty run")
                    file += int(ch)
                else:
                    if file >= 8:
                        raise MalformedFen(f"rank {rank + 1} overflows 8 files")
                    cells[rank * 8 + file] = Piece.from_letter(ch)
                    file += 1
            if file != 8:
                raise MalformedFen(f"rank {rank + 1} sums to {file} files, not 8")
        return cls(tuple(cells))


@dataclass(frozen=True)
class CastlingRights:
    white_kingside: bool = True
    white_queenside: bool = True
    black_kingside: bool = True
    black_queenside: bool = True

    def fen_field(self) -> str:
        text = ""
        if self.white_kingside:
            text += "K"
        if self.white_queenside:
            text += "Q"
        if self.black_kingside:
            text += "k"
        if self.black_queenside:
            text += "q"
        return text or "-"

    @classmethod
    def from_fen_field(cls, text: str) -> "CastlingRights":
        if text == "-":
            return cls(False, False, False, False)
        if not text or any(ch not in "KQkq" for ch in text) or len(set(text)) != len(text):
            raise MalformedFen(f"bad castling field {text!r}")
        return cls("K" in text, "Q" in text, "k" in text, "q" in text)


@dataclass(frozen=True)
class GameState:
    """Full position.  Equality compares the FEN-visible fields only, so
    parse_fen(emit_fen(s)) == s holds regardless of accumulated history."""

    placement: Placement
    side_to_move: Color
    castling: CastlingRights
    en_passant: Optional[Square]
    halfmove_clock: int
    fullmove_number: int
    history: tuple = field(default=(), compare=False)
    initial_fen: str = field(default=STANDARD_START_FEN, compare=False, repr=False)
    repetition_keys: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.en_passant is not None and self.en_passant.rank not in (2, 5):
            raise MalformedFen("en-passant target must be on rank 3 or 6")
        if not self.repetition_keys:
            object.__setattr__(self, "repetition_keys", (self.position_key(),))

    def __hash__(self):
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = hash(
                (
                    self.placement.cells,
                    self.side_to_move.value,
                    self.castling,
                    self.en_passant,
                    self.halfmove_clock,
                    self.fullmove_number,
                )
            )
            object.__setattr__(self, "_hash", cached)
        return cached

    def position_key(self) -> tuple:
        """Repetition key: placement + side + rights + en-passant target."""
        return (self.placement.cells, self.side_to_move, self.castling, self.en_passant)


def parse_fen(text: str, mode: str = "game") -> Union[GameState, Placement]:
    """Parse a FEN string.

    mode "game" requires all six fields and returns a GameState; mode
    "placement" accepts a bare piece-placement field (extra fields are
    ignored) and returns a Placement with no piece-count rules applied.
    """
    if not isinstance(text, str) or not text.strip():
        raise MalformedFen("empty FEN")
    fields = text.split()
    if mode == "placement":
        return Placement.from_board_fen(fields[0])
    if mode != "game":
        raise ValueError(f"unknown parse mode {mode!r}")
    if len(fields) != 6:
        raise MalformedFen(f"expected 6 FEN fields, got {len(fields)}")
    placement = Placement.from_board_fen(fields[0])
    if fields[1] not in ("w", "b"):
        raise MalformedFen(f"bad side-to-move field {fields[1]!r}")
    side = Color(fields[1])
    castling = CastlingRights.from_fen_field(fields[2])
    if fields[3] == "-":
        ep = None
    else:
        try:
            ep = Square.from_name(fields[3])
        except ValueError:
            raise MalformedFen(f"bad en-passant field {fields[3]!r}") from None
    try:
        halfmove = int(fields[4])
        fullmove = int(fields[5])
    except ValueError:
        raise MalformedFen("clock fields must be integers") from None
    if halfmove < 0 or fullmove < 1:
        raise MalformedFen("clock fields out of range")
    state = GameState(placement, side, castling, ep, halfmove, fullmove)
    object.__setattr__(state, "initial_fen", emit_fen(state))
    return state


def emit_fen(state: Union[GameState, Placement]) -> str:
    """Canonical FEN; the placement-only form is just the board field."""
    if isinstance(state, Placement):
        return state.board_fen()
    ep = "-" if state.en_passant is None else state.en_passant.name
    return " ".join(
        (
            state.placement.board_fen(),
            state.side_to_move.value,
            state.castling.fen_field(),
            ep,
            str(state.halfmove_clock),
            str(state.fullmove_number),
        )
    )


def standard_start() -> GameState:
    return parse_fen(STANDARD_START_FEN)


# --- plausibility -----------------------------------------------------------

#: base piece counts per side; promotions may raise the non-pawn ones
_BASE_COUNTS = {
    PieceKind.ROOK: 2,
    PieceKind.KNIGHT: 2,
    PieceKind.BISHOP: 2,
    PieceKind.QUEEN: 1,
}


@dataclass(frozen=True)
class PlausibilityReport:
    ok: bool
    violations: tuple

    @classmethod
    def from_violations(cls, violations: Sequence[str]) -> "PlausibilityReport":
        return cls(not violations, tuple(violations))


def plausibility_check(placement, profile: str = "gameplay") -> PlausibilityReport:
    """Check a placement against the position-sanity rules.

    The gameplay profile enforces one king per color, pawn caps, no pawns on
    the back ranks, and promotable-piece consistency (surplus majors/minors
    cannot exceed the number of missing pawns).  The dataset profile only
    validates cell contents, because data-collection layouts are not chess
    positions.  ``placement`` may also be a raw 64-item sequence of FEN
    letters / Piece / None, in which case bad entries are reported as
    invalid-cell violations.
    """
    if profile not in ("gameplay", "dataset"):
        raise ValueError(f"unknown plausibility profile {profile!r}")
    violations = []
    cells: list = [None] * 64
    if isinstance(placement, Placement):
        cells = list(placement.cells)
    else:
        raw = list(placement)
        if len(raw) != 64:
            return PlausibilityReport.from_violations(["invalid-cell"])
        for i, entry in enumerate(raw):
            if entry is None or isinstance(entry, Piece):
                cells[i] = entry
            elif isinstance(entry, str):
                try:
                    cells[i] = Piece.from_letter(entry)
                except MalformedFen:
                    violations.append("invalid-cell")
            else:
                violations.append("invalid-cell")
    if profile == "dataset":
        return PlausibilityReport.from_violations(sorted(set(violations)))

    for color in Color:
        kings = sum(
            1 for p in cells if p is not None and p.color is color and p.kind is PieceKind.KING
        )
        if kings == 0:
            violations.append("missing-king")
        elif kings > 1:
            violations.append("extra-king")
        pawns = sum(
            1 for p in cells if p is not None and p.color is color and p.kind is PieceKind.PAWN
        )
        if pawns > 8:
            violations.append("too-many-pawns")
        surplus = 0
        for kind, base in _BASE_COUNTS.items():
            n = sum(
                1 for p in cells if p is not None and p.color is color and p.kind is kind
            )
            surplus += max(0, n - base)
        if surplus > max(0, 8 - pawns):
            violations.append("count-exceeds-promotable")
    for index in list(range(0, 8)) + list(range(56, 64)):
        p = cells[index]
        if p is not None and p.kind is PieceKind.PAWN:
            violations.append("pawn-on-back-rank")
            break
    return PlausibilityReport.from_violations(sorted(set(violations)))
