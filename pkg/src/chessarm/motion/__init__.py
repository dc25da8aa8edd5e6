"""Move commands, waypoint plans, trajectories, and the grasp model."""

from .commands import (
    MalformedCommand,
    MoveCommand,
    decode_move,
    encode_move,
    path_obstructed,
)
from .grasp import (
    GraspModel,
    GraspOutcome,
    WrongTrialCount,
    categorize_grasp_trials,
    correct_grasp_rate,
    grasp_target,
    simulate_grasp_trial,
)
from .trajectory import DegeneratePath, Segment, Trajectory, time_parameterize
from .waypoints import (
    MotionLimits,
    OutOfReach,
    OutsideWorkspace,
    Waypoint,
    pick_and_place,
    plan_waypoints,
)

__all__ = [
    "DegeneratePath",
    "GraspModel",
    "GraspOutcome",
    "MalformedCommand",
    "MotionLimits",
    "MoveCommand",
    "OutOfReach",
    "OutsideWorkspace",
    "Segment",
    "Trajectory",
    "Waypoint",
    "WrongTrialCount",
    "categorize_grasp_trials",
    "correct_grasp_rate",
    "decode_move",
    "encode_move",
    "grasp_target",
    "path_obstructed",
    "pick_and_place",
    "plan_waypoints",
    "simulate_grasp_trial",
    "time_parameterize",
]
