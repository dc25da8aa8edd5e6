"""Rest-to-rest trapezoidal time parameterization of waypoint paths."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .waypoints import MotionLimits, Waypoint


class DegeneratePath(ValueError):
    """The waypoint path has zero total length."""


@dataclass(frozen=True)
class Segment:
    start: np.ndarray
    end: np.ndarray
    direction: np.ndarray
    length: float
    t_accel: float
    t_cruise: float
    duration: float
    peak_velocity: float
    gripper: str
    start_time: float


def _profile(length: float, v_max: float, a_max: float) -> Tuple[float, float, float, float]:
    """(t_accel, t_cruise, duration, peak velocity) for one rest-to-rest leg."""
    if length <= 0.0:
        return 0.0, 0.0, 0.0, 0.0
    if length >= v_max * v_max / a_max:
        t_accel = v_max / a_max
        t_cruise = (length - v_max * v_max / a_max) / v_max
        return t_accel, t_cruise, length / v_max + v_max / a_max, v_max
    t_accel = math.sqrt(length / a_max)
    return t_accel, 0.0, 2.0 * t_accel, a_max * t_accel


@dataclass(frozen=True)
class Trajectory:
    """A piecewise-linear path with per-segment trapezoidal timing.

    Starts and ends at rest; |velocity| never exceeds v_max and
    |acceleration| never exceeds a_max at any sample time.
    """

    segments: Tuple[Segment, ...]
    total_duration: float
    limits: MotionLimits

    def sample(self, t: float):
        """(position, velocity, acceleration, gripper) at time t.

        Clamped to the path endpoints outside [0, total_duration].
        """
        if not self.segments:
            raise DegeneratePath("empty trajectory")
        if t <= 0.0:
            first = self.segments[0]
            return first.start.copy(), np.zeros(3), np.zeros(3), first.gripper
        for segment in self.segments:
            local = t - segment.start_time
            if local <= segment.duration:
                return self._sample_segment(segment, local)
        last = self.segments[-1]
        return last.end.copy(), np.zeros(3), np.zeros(3), last.gripper

    def _sample_segment(self, seg: Segment, tau: float):
        a = self.limits.a_max
        if tau < seg.t_accel:
            dist = 0.5 * a * tau * tau
            speed = a * tau
            accel = a
        elif tau < seg.t_accel + seg.t_cruise:
            dist = 0.5 * a * seg.t_accel**2 + seg.peak_velocity * (tau - seg.t_accel)
            speed = seg.peak_velocity
            accel = 0.0
        else:
            remaining = seg.duration - tau
            dist = seg.length - 0.5 * a * remaining * remaining
            speed = a * remaining
            accel = -a
        position = seg.start + seg.direction * dist
        return position, seg.direction * speed, seg.direction * accel, seg.gripper

    def csv_rows(self, dt: float = 0.01) -> List[Tuple[float, float, float, float, str]]:
        """(t, x, y, z, gripper) rows for the executed-trajectory log."""
        rows = []
        t = 0.0
        while t < self.total_duration:
            position, _, _, gripper = self.sample(t)
            rows.append((round(t, 6), position[0], position[1], position[2], gripper))
            t += dt
        position, _, _, gripper = self.sample(self.total_duration)
        rows.append((round(self.total_duration, 6), position[0], position[1], position[2], gripper))
        return rows


def time_parameterize(waypoints: Sequence[Waypoint], limits: MotionLimits) -> Trajectory:
    """Build the limit-respecting trajectory through the waypoints in order.

    Each leg runs rest-to-rest: T = L/v_max + v_max/a_max when the leg is
    long enough to cruise, otherwise T = 2*sqrt(L/a_max).  Zero-length legs
    (gripper actuation in place) contribute zero duration.
    """
    if len(waypoints) < 2:
        raise ValueError("need at least two waypoints")
    segments = []
    clock = 0.0
    total_length = 0.0
    for before, after in zip(waypoints, waypoints[1:]):
        delta = after.position - before.position
        length = float(np.linalg.norm(delta))
        total_length += length
        direction = delta / length if length > 0 else np.zeros(3)
        t_accel, t_cruise, duration, peak = _profile(length, limits.v_max, limits.a_max)
        segments.append(
            Segment(
                start=before.position,
                end=after.position,
                direction=direction,
                length=length,
                t_accel=t_accel,
                t_cruise=t_cruise,
                duration=duration,
                peak_velocity=peak,
                gripper=after.gripper,
                start_time=clock,
            )
        )
        clock += duration
    if total_length <= 0.0:
        raise DegeneratePath("zero total path length")
    return Trajectory(tuple(segments), clock, limits)
