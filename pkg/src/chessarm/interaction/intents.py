"""Keyword intent matching for typed (or transcribed) player requests."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class IntentKind(enum.Enum):
    EXPLAIN_LAST = "explain-last"
    PREDICT_NEXT = "predict-next"
    NONE = "none"


@dataclass(frozen=True)
class Intent:
    kind: IntentKind
    raw_transcript: str


def match_intent(transcript: str) -> Intent:
    """Map free text onto one of the two analysis requests.

    Case-insensitive keyword containment: "explain" asks about the move
    just made, "analyze"/"analyse"/"predict" about the move to come.
    Everything else is no request at all; this never fails.
    """
    lowered = (transcript or "").lower()
    if "explain" in lowered:
        return Intent(IntentKind.EXPLAIN_LAST, transcript)
    if "analyze" in lowered or "analyse" in lowered or "predict" in lowered:
        return Intent(IntentKind.PREDICT_NEXT, transcript)
    return Intent(IntentKind.NONE, transcript)
