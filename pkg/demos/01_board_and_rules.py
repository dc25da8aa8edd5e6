"""
Board core walkthrough
======================

Positions, FEN round trips, the plausibility profiles, and how a move is
inferred from two observed placements.
"""

from chessarm.board import (
    NO_MOVE,
    Piece,
    Square,
    apply_move,
    emit_fen,
    history_line,
    infer_move,
    legal_moves,
    parse_fen,
    parse_san,
    plausibility_check,
    standard_start,
)

############################################################
# A position is parsed from FEN and emits back byte-identically.

state = standard_start()
print("start:", emit_fen(state))
print("legal moves:", len(legal_moves(state)))

############################################################
# Play a short opening and look at the numbered history line.

for text in ("e4", "e5", "Nf3", "Nc6", "Bc4"):
    state = apply_move(state, parse_san(state, text))
print("after five plies:", emit_fen(state))
print("history:", history_line(state))

############################################################
# The gameplay plausibility profile flags impossible layouts; the dataset
# profile accepts them, because data-collection layouts are not games.

layout = parse_fen(
    "pppppppp/1nbqkbnr/PPPPPPPP/RNBQKBNR/PPPPPPPP/rnbqkbnr/pppppppp/RNBQKBNR",
    mode="placement",
)
print("gameplay violations:", plausibility_check(layout, "gameplay").violations)
print("dataset profile ok: ", plausibility_check(layout, "dataset").ok)

############################################################
# Move inference: show the rules engine two placements and it names the
# unique legal move between them (or reports that none exists).

before = standard_start()
after = apply_move(before, parse_san(before, "Nf3")).placement
print("inferred:", infer_move(before, after).uci)
print("identity:", infer_move(before, before.placement) is NO_MOVE)

teleported = before.placement.with_cells(
    {Square.from_name("e2").index: None, Square.from_name("e5").index: Piece.from_letter("P")}
)
print("teleport explains as:", infer_move(before, teleported))
