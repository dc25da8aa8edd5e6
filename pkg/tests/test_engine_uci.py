"""UCI parsing and sessions against the bundled stub engine."""

import json
import sys

import pytest

from chessarm.board import emit_fen, legal_moves, parse_fen, standard_start
from chessarm.engine import (
    EngineConfig,
    EngineScore,
    EngineUnavailable,
    HandshakeTimeout,
    NoLegalMoves,
    ParseError,
    open_session,
    parse_info_line,
    stub_engine_argv,
)
from chessarm.engine.stub import StubEngine

START_FEN = emit_fen(standard_start())


def stub_config(**kwargs):
    return EngineConfig(executable=stub_engine_argv(), **kwargs)


class TestParseInfoLine:
    def test_cp_line(self):
        info = parse_info_line("info depth 20 multipv 1 score cp 34 pv e2e4 e7e5")
        assert info.depth == 20
        assert info.multipv == 1
        assert info.score == EngineScore.cp(34)
        assert info.pv == ["e2e4", "e7e5"]

    def test_mate_line_defaults_to_rank_one(self):
        info = parse_info_line("info depth 12 score mate 3 pv d1h5")
        assert info.multipv == 1
        assert info.score == EngineScore.mate(3)
        assert info.pv == ["d1h5"]

    def test_string_line_is_empty_partial(self):
        info = parse_info_line("info string verification ok")
        assert info.score is None and info.pv == []

    def test_unknown_tokens_skipped(self):
        info = parse_info_line(
            "info depth 9 seldepth 12 nodes 104023 nps 1200000 hashfull 13 "
            "tbhits 0 time 87 multipv 2 score cp -15 lowerbound pv g8f6 b1c3"
        )
        assert info.multipv == 2
        assert info.score == EngineScore.cp(-15)
        assert info.pv == ["g8f6", "b1c3"]

    @pytest.mark.parametrize(
        "bad",
        [
            "info depth 20 score cp abc pv e2e4",
            "info score mate pv e2e4",
            "info score nonsense 3",
            "bestmove e2e4",
        ],
    )
    def test_malformed(self, bad):
        with pytest.raises(ParseError):
            parse_info_line(bad)

    def test_total_over_stub_output(self):
        """Every info line the stub can emit parses without error."""
        collected = []

        class Sink:
            def write(self, text):
                collected.append(text)

            def flush(self):
                pass

        engine = StubEngine(out=Sink())
        engine.handle("uci")
        engine.handle("isready")
        engine.handle("setoption name MultiPV value 3")
        for fen in (
            START_FEN,
            "r1bqkbnr/pppp1ppp/2n5/4p3/4P3/5N2/PPPP1PPP/RNBQKB1R w KQkq - 2 3",
            "7k/5Q2/6K1/8/8/8/8/8 w - - 0 1",
        ):
            engine.handle(f"position fen {fen}")
            engine.handle("go depth 6")
        infos = [l.strip() for l in collected if l.startswith("info")]
        assert infos
        for line in infos:
            parse_info_line(line)


class TestSession:
    def test_handshake_captures_name(self):
        with open_session(stub_config()) as session:
            assert session.name == "chessarm-stub 1"

    def test_missing_executable(self):
        with pytest.raises(EngineUnavailable):
            open_session(EngineConfig(executable="/nonexistent/engine-binary"))

    def test_multipv_option_sent(self):
        with open_session(stub_config(multipv=3)) as session:
            assert "setoption name MultiPV value 3" in session.sent_lines()

    def test_handshake_timeout(self):
        silent = [sys.executable, "-c", "import time; time.sleep(30)"]
        with pytest.raises(HandshakeTimeout):
            open_session(EngineConfig(executable=silent, handshake_timeout=0.5))

    def test_analyse_start_position(self):
        with open_session(stub_config(multipv=3, depth=6)) as session:
            lines = session.analyse(START_FEN)
            assert [l.rank for l in lines] == [1, 2, 3]
            for line in lines:
                assert line.pv and line.pv[0] == line.move
                assert line.score.kind in ("centipawns", "mate")

    def test_analyse_is_deterministic(self):
        with open_session(stub_config(multipv=2, depth=6)) as first:
            a = first.analyse(START_FEN)
        with open_session(stub_config(multipv=2, depth=6)) as second:
            b = second.analyse(START_FEN)
        assert a == b

    def test_line_count_clipped_by_legal_moves(self):
        # a king in a corner with one escape square
        fen = "k7/2q5/8/8/8/8/8/1r4K1 w - - 0 1"
        state = parse_fen(fen)
        n = len(legal_moves(state))
        assert 1 <= n < 3
        with open_session(stub_config(multipv=3, depth=4)) as session:
            lines = session.analyse(fen)
            assert len(lines) == n

    def test_mate_input_raises(self):
        with open_session(stub_config()) as session:
            with pytest.raises(NoLegalMoves):
                session.analyse("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1")

    def test_mate_in_one_reported(self):
        with open_session(stub_config(multipv=1, depth=4)) as session:
            lines = session.analyse("6k1/8/6K1/8/8/8/8/R7 w - - 0 1")
            assert lines[0].score.kind == "mate"
            assert lines[0].score.value == 1
            assert lines[0].move.uci == "a1a8"


@pytest.mark.skipif(
    "CHESSARM_REAL_ENGINE" not in __import__("os").environ,
    reason="set CHESSARM_REAL_ENGINE=/path/to/engine to run",
)
def test_real_engine_integration():
    """Opt-in: the same client surface against an actual UCI binary."""
    import os

    config = EngineConfig(
        executable=os.environ["CHESSARM_REAL_ENGINE"], threads=2, depth=10, multipv=2
    )
    with open_session(config) as session:
        lines = session.analyse(START_FEN)
        assert [l.rank for l in lines] == [1, 2]
        for line in lines:
            assert line.pv and line.pv[0] == line.move


class TestScriptedEngine:
    def test_scripted_multipv_transcript(self, tmp_path):
        script = {
            "responses": {
                f"fen {START_FEN}": {
                    "info": [
                        "info depth 20 multipv 1 score cp 34 pv e2e4 e7e5",
                        "info depth 20 multipv 2 score cp 21 pv d2d4 d7d5",
                    ],
                    "bestmove": "e2e4",
                }
            }
        }
        path = tmp_path / "script.json"
        path.write_text(json.dumps(script))
        config = EngineConfig(executable=stub_engine_argv(str(path)), multipv=2)
        with open_session(config) as session:
            lines = session.analyse(START_FEN, depth=20, multipv=2)
        assert [l.rank for l in lines] == [1, 2]
        assert lines[0].move.uci == "e2e4" and lines[0].score == EngineScore.cp(34)
        assert lines[1].move.uci == "d2d4" and lines[1].score == EngineScore.cp(21)
        assert [m.uci for m in lines[0].pv] == ["e2e4", "e7e5"]
