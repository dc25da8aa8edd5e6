"""The two-step legality-driven correction loop around the classifiers.

Step one checks the recognized placement against the position-sanity rules;
step two checks that the placement is explainable as a legal move from the
previous state.  A failure at either step burns a retake (same pose), then
one sideways-viewpoint attempt; an exhausted budget halts the pipeline for
manual correction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

from ..board.core import GameState, Move, Placement, PlausibilityReport, plausibility_check
from ..board.moves import NO_MATCH, NO_MOVE, AmbiguousMove, infer_move
from .backends import CaptureContext, ClassifierBackend, classify_position
from .crops import CropWindow


@dataclass(frozen=True)
class RetakePolicy:
    max_retakes: int = 2
    viewpoint_enabled: bool = True

    def attempt_kinds(self) -> List[str]:
        kinds = ["initial"] + ["retake"] * self.max_retakes
        if self.viewpoint_enabled:
            kinds.append("viewpoint")
        return kinds


@dataclass(frozen=True)
class Attempt:
    kind: str
    placement: Placement
    report: PlausibilityReport
    failure: Optional[str] = None  # None when this attempt resolved the turn


@dataclass(frozen=True)
class Resolved:
    """The observation was reconciled: a move, or None when nothing changed."""

    move: Optional[Move]


@dataclass(frozen=True)
class Halted:
    reason: str
    observed: Placement


@dataclass(frozen=True)
class PerceptionOutcome:
    result: Union[Resolved, Halted]
    attempts: Tuple[Attempt, ...]

    @property
    def resolved(self) -> bool:
        return isinstance(self.result, Resolved)


CaptureFn = Callable[[str, int], Tuple[Sequence[CropWindow], CaptureContext]]


def perceive_with_correction(
    prev: GameState,
    capture: CaptureFn,
    backend: ClassifierBackend,
    policy: RetakePolicy = RetakePolicy(),
) -> PerceptionOutcome:
    """Classify, sanity-check, and reconcile the board against `prev`.

    `capture(kind, ordinal)` supplies the crop windows and context for each
    attempt; retakes reuse the same pose while the viewpoint attempt is
    expected to supply laterally offset windows.  Halting is a value, not
    an error.
    """
    attempts: List[Attempt] = []
    failure = "no-attempts"
    observed: Optional[Placement] = None
    for ordinal, kind in enumerate(policy.attempt_kinds()):
        windows, context = capture(kind, ordinal)
        observed = classify_position(backend, windows, context)
        report = plausibility_check(observed, "gameplay")
        if not report.ok:
            failure = "implausible-position"
            attempts.append(Attempt(kind, observed, report, failure))
            continue
        try:
            inference = infer_move(prev, observed)
        except AmbiguousMove:
            failure = "ambiguous-move"
            attempts.append(Attempt(kind, observed, report, failure))
            continue
        if inference is NO_MATCH:
            failure = "no-legal-move-matches"
            attempts.append(Attempt(kind, observed, report, failure))
            continue
        attempts.append(Attempt(kind, observed, report, None))
        move = None if inference is NO_MOVE else inference
        return PerceptionOutcome(Resolved(move), tuple(attempts))
    return PerceptionOutcome(Halted(failure, observed), tuple(attempts))
