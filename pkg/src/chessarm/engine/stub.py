"""A deterministic UCI engine for tests and offline play.

Runnable as ``python -m chessarm.engine.stub``.  Search is a fixed shallow
material scan with deterministic tie-breaking, so identical inputs always
produce identical analysis; strength is beside the point.  With --script a
JSON file of canned responses takes over, which lets tests pin exact
transcripts.

Script format::

    {"responses": {"startpos moves e2e4": {"info": ["info ..."], "bestmove": "e7e5"},
                   "*": {"info": [...], "bestmove": "..."}}}
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Tuple

from ..board.core import Color, GameState, PieceKind, parse_fen, standard_start
from ..board.moves import _apply_unchecked, apply_move, in_check, legal_moves, resolve_uci

PIECE_VALUE = {
    PieceKind.PAWN: 100,
    PieceKind.KNIGHT: 320,
    PieceKind.BISHOP: 330,
    PieceKind.ROOK: 500,
    PieceKind.QUEEN: 900,
    PieceKind.KING: 0,
}

#: modest center pull so openings do not start with rook-pawn shuffles
CENTER_FILES = (2, 3, 4, 5)


def material(cells: tuple, color: Color) -> int:
    score = 0
    for index, piece in enumerate(cells):
        if piece is None:
            continue
        value = PIECE_VALUE[piece.kind] + (2 if index % 8 in CENTER_FILES else 0)
        score += value if piece.color is color else -value
    return score


def score_move(state: GameState, move) -> Tuple[int, Optional[int]]:
    """(centipawns, mate) for one root move, from the mover's side.

    Mate is 1 when the move checkmates immediately; stalemate scores 0.
    """
    after = _apply_unchecked(state, move)
    if in_check(after) and not legal_moves(after):
        return 0, 1
    return material(after.placement.cells, state.side_to_move), None


def ranked_moves(state: GameState) -> List:
    moves = legal_moves(state)
    scored = []
    for move in moves:
        cp, mate = score_move(state, move)
        key = 10**7 if mate else cp
        scored.append((key, move))
    scored.sort(key=lambda pair: (-pair[0], pair[1].uci))
    return scored


def principal_variation(state: GameState, first_move, plies: int = 10) -> List[str]:
    """Greedy continuation: each side plays the stub's own best reply."""
    pv = [first_move.uci]
    cursor = _apply_unchecked(state, first_move)
    while len(pv) < plies:
        ranked = ranked_moves(cursor)
        if not ranked:
            break
        move = ranked[0][1]
        pv.append(move.uci)
        cursor = _apply_unchecked(cursor, move)
    return pv


class StubEngine:
    def __init__(self, script: Optional[dict] = None, out=None):
        self.script = script or {}
        self.out = out or sys.stdout
        self.state = standard_start()
        self.position_key = "startpos"
        self.multipv = 1
        self.options = {}

    def emit(self, line: str) -> None:
        self.out.write(line + "\n")
        self.out.flush()

    def handle(self, line: str) -> bool:
        """Process one command; returns False when the engine should exit."""
        line = line.strip()
        if not line:
            return True
        if line == "uci":
            self.emit("id name chessarm-stub 1")
            self.emit("id author chessarm")
            self.emit("option name MultiPV type spin default 1 min 1 max 64")
            self.emit("option name Threads type spin default 1 min 1 max 64")
            self.emit("uciok")
        elif line == "isready":
            self.emit("readyok")
        elif line == "ucinewgame":
            self.state = standard_start()
            self.position_key = "startpos"
        elif line.startswith("setoption"):
            self._setoption(line)
        elif line.startswith("position"):
            self._position(line)
        elif line.startswith("go"):
            self._go(line)
        elif line == "quit":
            return False
        # unknown commands are ignored, as the protocol requires
        return True

    def _setoption(self, line: str) -> None:
        tokens = line.split()
        name, value = None, None
        if "name" in tokens:
            i = tokens.index("name") + 1
            j = tokens.index("value") if "value" in tokens else len(tokens)
            name = " ".join(tokens[i:j])
            if "value" in tokens:
                value = " ".join(tokens[j + 1 :])
        if name:
            self.options[name] = value
            if name.lower() == "multipv" and value is not None:
                self.multipv = max(1, int(value))

    def _position(self, line: str) -> None:
        rest = line[len("position") :].strip()
        self.position_key = rest
        tokens = rest.split()
        moves = []
        if "moves" in tokens:
            cut = tokens.index("moves")
            moves = tokens[cut + 1 :]
            tokens = tokens[:cut]
        if tokens and tokens[0] == "startpos":
            state = standard_start()
        elif tokens and tokens[0] == "fen":
            state = parse_fen(" ".join(tokens[1:]))
        else:
            return  # malformed; keep the previous position
        for uci in moves:
            state = apply_move(state, resolve_uci(state, uci))
        self.state = state

    def _scripted_response(self):
        responses = self.script.get("responses", {})
        return responses.get(self.position_key) or responses.get("*")

    def _go(self, line: str) -> None:
        scripted = self._scripted_response()
        if scripted is not None:
            for info in scripted.get("info", []):
                self.emit(info)
            self.emit("bestmove " + scripted.get("bestmove", "(none)"))
            return
        tokens = line.split()
        depth = 8
        if "depth" in tokens:
            depth = int(tokens[tokens.index("depth") + 1])
        ranked = ranked_moves(self.state)
        if not ranked:
            self.emit("info depth 0 score mate 0")
            self.emit("bestmove (none)")
            return
        count = min(self.multipv, len(ranked))
        for rank in range(count):
            key, move = ranked[rank]
            pv = principal_variation(self.state, move)
            if key >= 10**7:
                score = "score mate 1"
            else:
                score = f"score cp {key}"
            self.emit(
                f"info depth {depth} seldepth {depth} multipv {rank + 1} "
                f"{score} nodes {1000 + rank} pv " + " ".join(pv)
            )
        self.emit("bestmove " + ranked[0][1].uci)

    def run(self, inp=None) -> None:
        inp = inp or sys.stdin
        for line in inp:
            try:
                if not self.handle(line):
                    break
            except Exception as exc:  # stay alive on bad positions/commands
                self.emit(f"info string error {type(exc).__name__}: {exc}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="deterministic UCI stub engine")
    parser.add_argument("--script", help="JSON file of canned responses")
    args = parser.parse_args(argv)
    script = None
    if args.script:
        with open(args.script) as handle:
            script = json.load(handle)
    StubEngine(script=script).run()
    return 0


if __name__ == "__main__":
    sys.exit(main())
