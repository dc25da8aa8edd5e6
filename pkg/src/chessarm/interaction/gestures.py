"""Nod/shake decisions from the win-probability cost of the latest move."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class GestureKind(enum.Enum):
    NOD = "nod"
    SHAKE = "shake"
    NONE = "none"


@dataclass(frozen=True)
class GesturePolicy:
    shake_threshold: float = 0.10
    nod_threshold: float = 0.02

    def __post_init__(self):
        if not (0.0 <= self.nod_threshold < self.shake_threshold <= 1.0):
            raise ValueError("need 0 <= nod_threshold < shake_threshold <= 1")


def gesture_for_drop(drop: float, policy: GesturePolicy = GesturePolicy()) -> GestureKind:
    """Gesture for a given win-probability drop (clamped at zero).

    Losing at least shake_threshold draws a shake; losing no more than
    nod_threshold draws an approving nod; the band between stays neutral.
    """
    drop = max(0.0, drop)
    if drop >= policy.shake_threshold:
        return GestureKind.SHAKE
    if drop <= policy.nod_threshold:
        return GestureKind.NOD
    return GestureKind.NONE


def decide_gesture(
    winprob_best: float,
    winprob_played: float,
    policy: GesturePolicy = GesturePolicy(),
) -> GestureKind:
    """Gesture for a move, given the mover's win probability under the best
    move versus the move actually played."""
    return gesture_for_drop(winprob_best - winprob_played, policy)
