"""UCI engine session management and analysis parsing.

A session owns one engine process and serializes all requests; at most one
"go" is outstanding at any time.  Every line in either direction is kept in
a transcript so tests can pin exact protocol exchanges.
"""

from __future__ import annotations

import queue
import subprocess
import sys
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..board.core import GameState, Move, parse_fen
from ..board.moves import _apply_unchecked, legal_moves
from .scoring import EngineScore


class EngineUnavailable(RuntimeError):
    pass


class HandshakeTimeout(RuntimeError):
    pass


class EngineCrashed(RuntimeError):
    pass


class ParseError(ValueError):
    pass


class NoLegalMoves(ValueError):
    """Analysis was requested for a mate or stalemate position."""


def stub_engine_argv(script_path: Optional[str] = None) -> List[str]:
    """Command line for the bundled deterministic stub engine."""
    argv = [sys.executable, "-m", "chessarm.engine.stub"]
    if script_path:
        argv += ["--script", str(script_path)]
    return argv


@dataclass(frozen=True)
class EngineConfig:
    executable: Union[str, Sequence[str]] = ()
    threads: int = 10
    depth: int = 20
    multipv: int = 3
    options: Dict[str, str] = field(default_factory=dict)
    handshake_timeout: float = 10.0

    def __post_init__(self):
        if self.threads < 1 or self.depth < 1 or self.multipv < 1:
            raise ValueError("threads, depth, and multipv must all be >= 1")

    @property
    def argv(self) -> List[str]:
        if isinstance(self.executable, str):
            return [self.executable]
        argv = list(self.executable)
        return argv if argv else stub_engine_argv()


@dataclass
class InfoLine:
    """The analysis-relevant fields of one "info" line."""

    depth: Optional[int] = None
    multipv: int = 1
    score: Optional[EngineScore] = None
    pv: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class ScoredLine:
    rank: int
    move: Move
    score: EngineScore
    pv: Tuple[Move, ...]
    depth: int

    def __post_init__(self):
        if not self.pv or self.pv[0] != self.move:
            raise ValueError("pv must be non-empty and begin with the line's move")


def parse_info_line(text: str) -> InfoLine:
    """Extract depth, multipv, score, and pv from a UCI info line.

    Unrecognized tokens are skipped; "string" swallows the rest of the
    line (such lines carry no analysis).  Raises ParseError on a malformed
    score token.
    """
    tokens = text.split()
    if not tokens or tokens[0] != "info":
        raise ParseError(f"not an info line: {text!r}")
    info = InfoLine()
    i = 1
    while i < len(tokens):
        token = tokens[i]
        if token == "string":
            break
        if token == "depth" and i + 1 < len(tokens):
            try:
                info.depth = int(tokens[i + 1])
            except ValueError:
                raise ParseError(f"bad depth token in {text!r}") from None
            i += 2
        elif token == "multipv" and i + 1 < len(tokens):
            try:
                info.multipv = int(tokens[i + 1])
            except ValueError:
                raise ParseError(f"bad multipv token in {text!r}") from None
            i += 2
        elif token == "score":
            if i + 2 >= len(tokens) or tokens[i + 1] not in ("cp", "mate"):
                raise ParseError(f"malformed score in {text!r}")
            try:
                value = int(tokens[i + 2])
            except ValueError:
                raise ParseError(f"malformed score value in {text!r}") from None
            kind = "centipawns" if tokens[i + 1] == "cp" else "mate"
            info.score = EngineScore(kind, value)
            i += 3
            # optional bound qualifiers follow the value
            while i < len(tokens) and tokens[i] in ("lowerbound", "upperbound"):
                i += 1
        elif token == "pv":
            info.pv = tokens[i + 1 :]
            break
        else:
            i += 1
    return info


class EngineSession:
    """One exclusive command pipeline to a running engine process."""

    def __init__(self, process: subprocess.Popen, config: EngineConfig):
        self.process = process
        self.config = config
        self.name: Optional[str] = None
        self.transcript: List[Tuple[str, str]] = []
        self._lines: "queue.Queue[Optional[str]]" = queue.Queue()
        self._lock = threading.Lock()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()

    def _pump(self) -> None:
        for raw in self.process.stdout:
            self._lines.put(raw.rstrip("\n"))
        self._lines.put(None)

    def send(self, line: str) -> None:
        self.transcript.append(("->", line))
        try:
            self.process.stdin.write(line + "\n")
            self.process.stdin.flush()
        except (BrokenPipeError, ValueError) as exc:
            raise EngineCrashed(f"engine pipe closed while sending {line!r}") from exc

    def read_line(self, timeout: float) -> str:
        try:
            line = self._lines.get(timeout=timeout)
        except queue.Empty:
            raise HandshakeTimeout(f"engine silent for {timeout} s") from None
        if line is None:
            raise EngineCrashed("engine closed its output stream")
        self.transcript.append(("<-", line))
        return line

    def sent_lines(self) -> List[str]:
        return [line for direction, line in self.transcript if direction == "->"]

    def close(self) -> None:
        try:
            if self.process.poll() is None:
                self.send("quit")
                self.process.wait(timeout=5)
        except Exception:
            self.process.kill()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # --- the one-outstanding-request surface ------------------------------

    def analyse(
        self,
        fen: str,
        depth: Optional[int] = None,
        multipv: Optional[int] = None,
        timeout: float = 60.0,
    ) -> List[ScoredLine]:
        """Rank-ordered candidate lines for a position.

        Returns exactly min(multipv, number of legal moves) lines, each
        with a principal variation of at least one ply.  Raises
        NoLegalMoves for mate/stalemate inputs and ParseError when the
        engine's output cannot be assembled into complete lines.
        """
        depth = depth or self.config.depth
        multipv = multipv or self.config.multipv
        state = parse_fen(fen)
        n_legal = len(legal_moves(state))
        if n_legal == 0:
            raise NoLegalMoves(f"no legal moves in {fen}")
        expected = min(multipv, n_legal)
        with self._lock:
            self.send(f"setoption name MultiPV value {multipv}")
            self.send(f"position fen {fen}")
            self.send(f"go depth {depth}")
            partials: Dict[int, InfoLine] = {}
            while True:
                line = self.read_line(timeout)
                if line.startswith("bestmove"):
                    break
                if line.startswith("info"):
                    info = parse_info_line(line)
                    if info.score is not None and info.pv:
                        partials[info.multipv] = info
        lines = []
        for rank in range(1, expected + 1):
            info = partials.get(rank)
            if info is None:
                raise ParseError(f"engine reported no line for rank {rank}")
            lines.append(self._build_line(state, rank, info))
        return lines

    def _build_line(self, state: GameState, rank: int, info: InfoLine) -> ScoredLine:
        moves = []
        cursor = state
        for uci in info.pv:
            match = next((m for m in legal_moves(cursor) if m.uci == uci), None)
            if match is None:
                break  # tolerate pv tails the rules reject; keep the prefix
            moves.append(match)
            cursor = _apply_unchecked(cursor, match)
        if not moves:
            raise ParseError(f"pv for rank {rank} starts with an illegal move: {info.pv}")
        return ScoredLine(
            rank=rank,
            move=moves[0],
            score=info.score,
            pv=tuple(moves),
            depth=info.depth or 0,
        )


def open_session(config: EngineConfig) -> EngineSession:
    """Spawn the engine and complete the uci/isready handshake."""
    try:
        process = subprocess.Popen(
            config.argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.DEVNULL,
            text=True,
            bufsize=1,
        )
    except (FileNotFoundError, PermissionError, OSError) as exc:
        raise EngineUnavailable(f"cannot start engine {config.argv!r}: {exc}") from exc
    session = EngineSession(process, config)
    try:
        session.send("uci")
        while True:
            line = session.read_line(config.handshake_timeout)
            if line.startswith("id name"):
                session.name = line[len("id name") :].strip()
            if line == "uciok":
                break
        session.send(f"setoption name Threads value {config.threads}")
        session.send(f"setoption name MultiPV value {config.multipv}")
        for key, value in config.options.items():
            session.send(f"setoption name {key} value {value}")
        session.send("isready")
        while session.read_line(config.handshake_timeout) != "readyok":
            pass
    except Exception:
        session.close()
        raise
    return session


def analyse(
    session: EngineSession,
    fen: str,
    depth: Optional[int] = None,
    multipv: Optional[int] = None,
) -> List[ScoredLine]:
    return session.analyse(fen, depth=depth, multipv=multipv)
