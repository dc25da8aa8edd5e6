"""Grasp-target compensation and the stochastic grasp-outcome model."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np


class WrongTrialCount(ValueError):
    pass


class GraspOutcome(enum.Enum):
    ACCURATE_GRAB = "accurate-grab"
    SLID_IN_GRAB = "slid-in-grab"
    MISS = "miss"


@dataclass(frozen=True)
class GraspModel:
    """Gripper positioning model.

    compensation is the software offset added to every grasp target; it
    cancels systematic_error, the repeatable bias of the arm/vision chain
    (the defaults make them equal, i.e. perfectly calibrated).  anisotropy
    holds the per-axis standard deviation of the residual random error in
    meters; the y axis (away from the base) runs larger.
    """

    compensation: Tuple[float, float] = (0.0055, 0.01)
    systematic_error: Tuple[float, float] = (0.0055, 0.01)
    r_accurate: float = 0.006
    r_remedy: float = 0.012
    anisotropy: Tuple[float, float] = (0.003, 0.0045)

    def __post_init__(self):
        if not (0.0 < self.r_accurate < self.r_remedy):
            raise ValueError("need 0 < r_accurate < r_remedy")


def grasp_target(center, model: GraspModel) -> np.ndarray:
    """Where the gripper should aim for a piece assumed at the square center."""
    center = np.asarray(center, dtype=float)
    offset = np.array([model.compensation[0], model.compensation[1], 0.0])
    return center + offset[: center.shape[0]]


def simulate_grasp_trial(piece_offset, model: GraspModel, seed: int) -> GraspOutcome:
    """One grasp attempt on a piece displaced from its square center.

    The gripper lands at compensation - systematic_error + noise from the
    aimed point; the trial outcome depends on how far the piece sits from
    the closed gripper: inside r_accurate is a clean grab, inside r_remedy
    the piece slides into the gripper teeth, farther out is a miss.
    """
    offset = np.asarray(piece_offset, dtype=float).reshape(2)
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, model.anisotropy)
    gripper_error = (
        np.asarray(model.compensation) - np.asarray(model.systematic_error) + noise
    )
    miss = offset - gripper_error
    distance = float(np.linalg.norm(miss))
    if distance <= model.r_accurate:
        return GraspOutcome.ACCURATE_GRAB
    if distance <= model.r_remedy:
        return GraspOutcome.SLID_IN_GRAB
    return GraspOutcome.MISS


def categorize_grasp_trials(outcomes: Sequence[GraspOutcome]) -> str:
    """Collapse a 10-trial block into accurate / remedied / missed.

    All ten correct is accurate grasping; eight or nine is remedied (the
    piece typically slid into the gripper); seven or fewer is missed.
    """
    if len(outcomes) != 10:
        raise WrongTrialCount(f"need exactly 10 trials, got {len(outcomes)}")
    correct = sum(
        1 for o in outcomes if o in (GraspOutcome.ACCURATE_GRAB, GraspOutcome.SLID_IN_GRAB)
    )
    if correct == 10:
        return "accurate"
    if correct >= 8:
        return "remedied"
    return "missed"


def correct_grasp_rate(offset, model: GraspModel, trials: int, seed: int) -> float:
    """Monte-Carlo correct-grasp probability at a fixed piece offset."""
    correct = 0
    for i in range(trials):
        outcome = simulate_grasp_trial(offset, model, seed * 1_000_003 + i)
        if outcome is not GraspOutcome.MISS:
            correct += 1
    return correct / trials
