"""Waypoint composition for slide/jump transports and the special moves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..board.core import Placement, Square
from ..geometry.fit import BoardFrame
from .commands import MoveCommand, path_obstructed


class OutOfReach(ValueError):
    """A target square lies beyond the arm's reach limit."""


class OutsideWorkspace(ValueError):
    """A planned waypoint leaves the allowed workspace box."""


@dataclass(frozen=True)
class Waypoint:
    position: np.ndarray
    gripper: str  # "open" or "closed"
    tag: str  # approach/descend/grasp/transit/release/retreat/disposal

    def __post_init__(self):
        position = np.asarray(self.position, dtype=float).reshape(3)
        position.flags.writeable = False
        object.__setattr__(self, "position", position)


@dataclass(frozen=True)
class MotionLimits:
    v_max: float = 0.1  # m/s
    a_max: float = 0.4  # m/s^2
    hover_height: float = 0.25  # overhead capture height, not used in plans
    slide_height: float = 0.015
    jump_height: float = 0.12
    bin_location: Tuple[float, float, float] = (0.40, 0.10, 0.02)
    workspace_box: Tuple[Tuple[float, float, float], Tuple[float, float, float]] = (
        (-0.35, -0.05, -0.005),
        (0.45, 0.70, 0.35),
    )
    reach_limit: float = 0.65

    def __post_init__(self):
        for name in ("v_max", "a_max", "hover_height", "slide_height", "jump_height", "reach_limit"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not (self.slide_height < self.jump_height < self.hover_height):
            raise ValueError("heights must satisfy slide < jump < hover")

    def inside_workspace(self, point) -> bool:
        lo, hi = self.workspace_box
        return all(lo[i] <= point[i] <= hi[i] for i in range(3))


def _center(frame: BoardFrame, square: Square) -> np.ndarray:
    return frame.centers[square.index]


def _up(frame: BoardFrame) -> np.ndarray:
    normal = frame.pose.rotation[:, 2]
    # keep "up" pointing away from the table regardless of fit orientation
    return normal if normal[2] >= 0 else -normal


def pick_and_place(
    src: np.ndarray,
    dst: np.ndarray,
    up: np.ndarray,
    limits: MotionLimits,
    jump: bool,
    place_tag: str = "release",
) -> List[Waypoint]:
    """The basic transport: approach, grasp, carry (flat or over), release.

    A slide carries the piece at slide height the whole way; a jump lifts it
    to jump height to clear other pieces, crosses, and lowers again.
    """
    high_src = src + up * limits.jump_height
    low_src = src + up * limits.slide_height
    high_dst = dst + up * limits.jump_height
    low_dst = dst + up * limits.slide_height
    plan = [
        Waypoint(high_src, "open", "approach"),
        Waypoint(low_src, "open", "descend"),
        Waypoint(low_src, "closed", "grasp"),
    ]
    if jump:
        plan.append(Waypoint(high_src, "closed", "transit"))
        plan.append(Waypoint(high_dst, "closed", "transit"))
        plan.append(Waypoint(low_dst, "closed", "transit"))
        plan.append(Waypoint(low_dst, "open", place_tag))
    else:
        plan.append(Waypoint(low_dst, "closed", "transit"))
        plan.append(Waypoint(low_dst, "open", place_tag))
    plan.append(Waypoint(high_dst, "open", "retreat"))
    return plan


def _removal_plan(
    victim: np.ndarray, up: np.ndarray, limits: MotionLimits
) -> List[Waypoint]:
    """Carry a captured piece off the board and drop it exactly at the bin."""
    bin_point = np.asarray(limits.bin_location, dtype=float)
    high_victim = victim + up * limits.jump_height
    low_victim = victim + up * limits.slide_height
    high_bin = bin_point + up * limits.jump_height
    return [
        Waypoint(high_victim, "open", "approach"),
        Waypoint(low_victim, "open", "descend"),
        Waypoint(low_victim, "closed", "grasp"),
        Waypoint(high_victim, "closed", "transit"),
        Waypoint(high_bin, "closed", "transit"),
        Waypoint(bin_point, "closed", "transit"),
        Waypoint(bin_point, "open", "disposal"),
        Waypoint(high_bin, "open", "retreat"),
    ]


def plan_waypoints(
    command: MoveCommand,
    frame: BoardFrame,
    placement: Placement,
    limits: MotionLimits,
) -> List[Waypoint]:
    """Waypoints realizing one encoded move on the given board.

    Captures first carry the captured piece to the bin; castling emits the
    king's transport followed by the rook's; en passant moves the pawn and
    then removes the bypassed pawn.  Every waypoint is validated against the
    workspace box and every target square against the reach limit.
    """
    up = _up(frame)
    targets = [command.from_sq, command.to_sq]
    plan: List[Waypoint] = []

    victim_sq: Optional[Square] = None
    if command.en_passant:
        victim_sq = Square(command.to_sq.file, command.from_sq.rank)
    elif command.capture:
        victim_sq = command.to_sq
    if victim_sq is not None:
        targets.append(victim_sq)

    for square in targets:
        if np.linalg.norm(_center(frame, square)) > limits.reach_limit:
            raise OutOfReach(f"square {square.name} beyond {limits.reach_limit} m reach")

    working = placement
    if command.capture and not command.en_passant:
        plan.extend(_removal_plan(_center(frame, victim_sq), up, limits))
        working = working.with_cells({victim_sq.index: None})

    src, dst = _center(frame, command.from_sq), _center(frame, command.to_sq)
    plan.extend(pick_and_place(src, dst, up, limits, jump=command.jump))
    working = working.with_cells(
        {
            command.to_sq.index: working.cells[command.from_sq.index],
            command.from_sq.index: None,
        }
    )

    if command.castling:
        rank = command.from_sq.rank
        if command.to_sq.file == 6:
            rook_from, rook_to = Square(7, rank), Square(5, rank)
        else:
            rook_from, rook_to = Square(0, rank), Square(3, rank)
        rook_jump = path_obstructed(working, rook_from, rook_to)
        plan.extend(
            pick_and_place(
                _center(frame, rook_from),
                _center(frame, rook_to),
                up,
                limits,
                jump=rook_jump,
            )
        )

    if command.en_passant:
        plan.extend(_removal_plan(_center(frame, victim_sq), up, limits))

    for waypoint in plan:
        if not limits.inside_workspace(waypoint.position):
            raise OutsideWorkspace(
                f"waypoint {waypoint.tag} at {np.round(waypoint.position, 3)} leaves the box"
            )
    return plan
