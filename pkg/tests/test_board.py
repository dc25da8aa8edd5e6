"""FEN codec, plausibility profiles, and placement transforms."""

import random

import pytest

from chessarm.board import (
    Color,
    MalformedFen,
    Piece,
    Placement,
    emit_fen,
    parse_fen,
    plausibility_check,
    shift_placement,
    standard_start,
    STANDARD_START_FEN,
)

# the deliberately non-game 63-piece layout used for data collection
COLLECTION_BASE_FEN = "pppppppp/1nbqkbnr/PPPPPPPP/RNBQKBNR/PPPPPPPP/rnbqkbnr/pppppppp/RNBQKBNR"
COLLECTION_SHIFT1_FEN = "1nbqkbnr/PPPPPPPP/RNBQKBNR/PPPPPPPP/rnbqkbnr/pppppppp/RNBQKBNR/pppppppp"

PIECE_LETTERS = "PNBRQKpnbrqk"


def random_placement(rng):
    density = rng.randint(0, 64)
    cells = [None] * 64
    for index in rng.sample(range(64), density):
        cells[index] = Piece.from_letter(rng.choice(PIECE_LETTERS))
    return Placement(tuple(cells))


class TestParseFen:
    def test_full_game_fields(self):
        fen = "r1bqkbnr/pppp1ppp/2n5/4p3/4P3/5N2/PPPP1PPP/RNBQKB1R w KQkq - 2 3"
        state = parse_fen(fen)
        assert state.side_to_move is Color.WHITE
        assert state.castling.fen_field() == "KQkq"
        assert state.halfmove_clock == 2
        assert state.fullmove_number == 3
        assert emit_fen(state) == fen

    def test_placement_only_63_pieces(self):
        placement = parse_fen(COLLECTION_BASE_FEN, mode="placement")
        assert sum(1 for c in placement.cells if c is not None) == 63

    def test_empty_board(self):
        placement = parse_fen("8/8/8/8/8/8/8/8", mode="placement")
        assert all(c is None for c in placement.cells)

    @pytest.mark.parametrize(
        "bad",
        [
            "8/8/8/8/8/8/8",  # 7 ranks
            "9/8/8/8/8/8/8/8",  # digit overflow
            "8/8/8/8/8/8/8/7x",  # unknown letter
            "ppppppppp/8/8/8/8/8/8/8",  # rank too long
            "8/8/8/8/8/8/8/8 w KQkq - 0",  # missing field
            "8/8/8/8/8/8/8/8 x KQkq - 0 1",  # bad side
            "8/8/8/8/8/8/8/8 w KQkp - 0 1",  # bad castling
            "8/8/8/8/8/8/8/8 w - e5 0 1",  # ep not on rank 3/6
            "8/8/8/8/8/8/8/8 w - - x 1",  # clock not a number
        ],
    )
    def test_malformed(self, bad):
        with pytest.raises(MalformedFen):
            parse_fen(bad)


class TestEmitFen:
    def test_standard_start(self):
        assert emit_fen(standard_start()) == STANDARD_START_FEN

    def test_collection_base_verbatim(self):
        placement = parse_fen(COLLECTION_BASE_FEN, mode="placement")
        assert emit_fen(placement) == COLLECTION_BASE_FEN

    def test_empty(self):
        assert emit_fen(Placement.empty()) == "8/8/8/8/8/8/8/8"

    def test_round_trip_1000_random_placements(self):
        rng = random.Random(20240416)
        for _ in range(1000):
            placement = random_placement(rng)
            assert parse_fen(emit_fen(placement), mode="placement") == placement


class TestPlausibility:
    def test_start_ok(self):
        report = plausibility_check(standard_start().placement, "gameplay")
        assert report.ok and report.violations == ()

    def test_missing_king(self):
        start = standard_start().placement
        no_king = start.with_cells({4: None})  # e1
        report = plausibility_check(no_king, "gameplay")
        assert not report.ok
        assert "missing-king" in report.violations

    def test_collection_base_by_profile(self):
        placement = parse_fen(COLLECTION_BASE_FEN, mode="placement")
        assert plausibility_check(placement, "dataset").ok
        report = plausibility_check(placement, "gameplay")
        assert "extra-king" in report.violations
        assert "too-many-pawns" in report.violations

    def test_extra_king(self):
        start = standard_start().placement
        report = plausibility_check(start.with_cells({16: Piece.from_letter("K")}), "gameplay")
        assert report.violations == ("extra-king",)

    def test_pawn_on_back_rank(self):
        placement = parse_fen("4k3/8/8/8/8/8/8/P3K3", mode="placement")
        report = plausibility_check(placement, "gameplay")
        assert report.violations == ("pawn-on-back-rank",)

    def test_promotable_surplus(self):
        # three queens with all eight pawns cannot come from promotions
        placement = parse_fen("4k3/8/8/8/8/QQQ5/PPPPPPPP/4K3", mode="placement")
        report = plausibility_check(placement, "gameplay")
        assert report.violations == ("count-exceeds-promotable",)
        # with two pawns missing the same queens are explainable
        ok = parse_fen("4k3/8/8/8/8/QQQ5/PPPPPP2/4K3", mode="placement")
        assert plausibility_check(ok, "gameplay").ok

    def test_removing_offender_clears_violation(self):
        placement = parse_fen("4k3/8/8/8/8/8/8/P3K3", mode="placement")
        assert plausibility_check(placement, "gameplay").violations == ("pawn-on-back-rank",)
        fixed = placement.with_cells({0: None})
        assert plausibility_check(fixed, "gameplay").ok

    def test_invalid_cells_raw_grid(self):
        raw = [None] * 64
        raw[10] = "P"
        raw[11] = "?"
        report = plausibility_check(raw, "dataset")
        assert report.violations == ("invalid-cell",)
        assert plausibility_check([None] * 63, "dataset").violations == ("invalid-cell",)


class TestShiftPlacement:
    def test_row_shift_matches_collected_label(self):
        base = parse_fen(COLLECTION_BASE_FEN, mode="placement")
        shifted = shift_placement(base, "row", 1)
        assert emit_fen(shifted) == COLLECTION_SHIFT1_FEN

    def test_full_cycle_is_identity(self):
        rng = random.Random(7)
        for _ in range(20):
            placement = random_placement(rng)
            assert shift_placement(placement, "row", 8) == placement
            assert shift_placement(placement, "column", 8) == placement

    def test_column_shift_inverse(self):
        base = parse_fen(COLLECTION_BASE_FEN, mode="placement")
        there = shift_placement(base, "column", 1)
        assert shift_placement(there, "column", -1) == base

    def test_shifts_commute_across_axes(self):
        rng = random.Random(99)
        for _ in range(20):
            placement = random_placement(rng)
            k, j = rng.randint(-8, 8), rng.randint(-8, 8)
            a = shift_placement(shift_placement(placement, "row", k), "column", j)
            b = shift_placement(shift_placement(placement, "column", j), "row", k)
            assert a == b

    def test_step_k_then_complement_is_identity(self):
        rng = random.Random(123)
        placement = random_placement(rng)
        for k in range(9):
            for axis in ("row", "column"):
                assert shift_placement(shift_placement(placement, axis, k), axis, 8 - k) == placement
