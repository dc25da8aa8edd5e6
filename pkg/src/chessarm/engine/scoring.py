"""Engine score types, the win-probability mapping, and move-quality labels."""

from __future__ import annotations

import enum
from dataclasses import dataclass


@dataclass(frozen=True)
class EngineScore:
    """An engine evaluation from the side-to-move's perspective."""

    kind: str  # "centipawns" or "mate"
    value: int  # centipawns, or signed mate distance in moves

    def __post_init__(self):
        if self.kind not in ("centipawns", "mate"):
            raise ValueError(f"unknown score kind {self.kind!r}")
        if self.kind == "mate" and self.value == 0:
            raise ValueError("mate distance cannot be zero")

    @classmethod
    def cp(cls, value: int) -> "EngineScore":
        return cls("centipawns", value)

    @classmethod
    def mate(cls, value: int) -> "EngineScore":
        return cls("mate", value)


@dataclass(frozen=True)
class WinProbParams:
    """Parameters of the score -> win-probability mapping.

    The engine literature guarantees only that scores rise with win rate;
    the concrete logistic here (1 decade of odds per `scale` centipawns)
    is this project's explicit stand-in and is configuration, not fact.
    """

    scale: float = 400.0  # centipawns per decade of odds
    mate_clamp: float = 0.999

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if not (0.5 < self.mate_clamp < 1.0):
            raise ValueError("mate_clamp must lie in (0.5, 1)")


def score_to_winprob(score: EngineScore, params: WinProbParams = WinProbParams()) -> float:
    """Map a score to the mover's win probability in [0, 1].

    Centipawns go through the logistic 1/(1 + 10^(-cp/scale)), which is
    strictly increasing and antisymmetric around 0.5; mate scores clamp to
    mate_clamp (or its complement when the mover is getting mated).
    """
    if score.kind == "mate":
        return params.mate_clamp if score.value > 0 else 1.0 - params.mate_clamp
    return 1.0 / (1.0 + 10.0 ** (-score.value / params.scale))


class QualityLabel(enum.Enum):
    EXCELLENT = "Excellent"
    GOOD = "Good"
    INACCURACY = "Inaccuracy"
    MISTAKE = "Mistake"
    BLUNDER = "Blunder"


@dataclass(frozen=True)
class QualityThresholds:
    """Win-probability-drop cut points between adjacent labels."""

    excellent: float = 0.02
    good: float = 0.05
    inaccuracy: float = 0.10
    mistake: float = 0.20

    def __post_init__(self):
        if not (0 <= self.excellent <= self.good <= self.inaccuracy <= self.mistake):
            raise ValueError("thresholds must be non-decreasing")


def quality_label(
    win_drop: float, thresholds: QualityThresholds = QualityThresholds()
) -> QualityLabel:
    """Label a move by how much win probability the mover gave up."""
    drop = max(0.0, win_drop)
    if drop < thresholds.excellent:
        return QualityLabel.EXCELLENT
    if drop < thresholds.good:
        return QualityLabel.GOOD
    if drop < thresholds.inaccuracy:
        return QualityLabel.INACCURACY
    if drop < thresholds.mistake:
        return QualityLabel.MISTAKE
    return QualityLabel.BLUNDER
