"""Prompt assembly: the fixed system message plus the six-field user payload."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Optional, Tuple

from ..board.core import GameState, emit_fen
from ..board.moves import _apply_unchecked
from ..board.notation import history_line, san
from ..engine.scoring import QualityLabel
from ..engine.uci import ScoredLine
from .intents import Intent, IntentKind

#: the user payload always carries exactly these keys, in this order
PAYLOAD_KEYS = ("question", "fen", "move", "evaluation", "future", "history")


class MissingAnalysis(ValueError):
    """The request needs analysis (or a last move) that does not exist."""


def system_message() -> str:
    """The packaged assistant instructions, byte-stable across builds."""
    return (
        resources.files("chessarm.interaction")
        .joinpath("assets/system_message.txt")
        .read_text()
        .rstrip("\n")
    )


@dataclass(frozen=True)
class MoveAnalysis:
    """An engine line about one move, anchored at the position it was
    scored from.

    For a just-played move the reference is the position before it (the
    line's pv begins with the move itself); for a recommendation the
    reference is the current position.
    """

    reference: GameState
    line: ScoredLine
    label: QualityLabel


@dataclass(frozen=True)
class PromptBundle:
    system: str
    payload: Tuple[Tuple[str, str], ...]  # ordered (key, value) pairs

    def user_message(self) -> str:
        """Single-line dict-style rendering, the layout the model was
        prompted with during development."""
        body = ", ".join(f"{key!r}: {value!r}" for key, value in self.payload)
        return "{" + body + "}"


def render_future(reference: GameState, line: ScoredLine, plies: int = 10) -> str:
    """Space-joined SAN continuation, truncated, each move followed by a
    space (trailing space included)."""
    sans = []
    cursor = reference
    for move in line.pv[:plies]:
        sans.append(san(cursor, move))
        cursor = _apply_unchecked(cursor, move)
    return "".join(text + " " for text in sans)


def build_prompt(
    intent: Intent,
    state: GameState,
    analysis: Optional[MoveAnalysis],
) -> PromptBundle:
    """Assemble the prompt for one analysis request.

    The question, current FEN, and numbered history come from `state`;
    the move, its quality label, and the predicted continuation come from
    `analysis`, rendered at the analysis reference position.
    """
    if intent.kind is IntentKind.NONE:
        raise ValueError("cannot build a prompt for a no-request transcript")
    if intent.kind is IntentKind.EXPLAIN_LAST and not state.history:
        raise MissingAnalysis("no last move exists to explain")
    if analysis is None:
        raise MissingAnalysis("no analysis available for this request")
    payload = (
        ("question", intent.raw_transcript),
        ("fen", emit_fen(state)),
        ("move", san(analysis.reference, analysis.line.move)),
        ("evaluation", analysis.label.value),
        ("future", render_future(analysis.reference, analysis.line)),
        ("history", history_line(state)),
    )
    return PromptBundle(system_message(), payload)
