"""Board grid fitting: a 6-DoF pose matching marker anchors to measurements."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from ..board.core import Square
from .optimize import NoConvergence, levenberg_marquardt
from .pose import Pose, rotvec_to_matrix

__all__ = [
    "BoardGeometry",
    "BoardFrame",
    "DegenerateMarkers",
    "NoConvergence",
    "fit_board_grid",
    "square_center",
    "registration_cost",
    "perturbed_pose",
]


class DegenerateMarkers(ValueError):
    """Fewer than three non-collinear marker centers."""


def default_marker_anchors(square_size: float = 0.06, margin: float = 0.03) -> np.ndarray:
    """Marker centers just outside the four grid corners, in the board frame."""
    top = 8 * square_size + margin
    return np.array(
        [
            [-margin, -margin, 0.0],
            [top, -margin, 0.0],
            [top, top, 0.0],
            [-margin, top, 0.0],
        ]
    )


@dataclass(frozen=True)
class BoardGeometry:
    square_size: float = 0.06  # 48 cm board / 8
    marker_anchors: np.ndarray = field(default_factory=default_marker_anchors)

    def __post_init__(self):
        if self.square_size <= 0:
            raise ValueError("square_size must be positive")
        anchors = np.asarray(self.marker_anchors, dtype=float).reshape(-1, 3)
        if len(anchors) != len({tuple(a) for a in anchors.round(12)}):
            raise ValueError("marker anchors must be distinct")
        anchors.flags.writeable = False
        object.__setattr__(self, "marker_anchors", anchors)

    def save(self, path) -> None:
        data = {
            "square_size": self.square_size,
            "marker_anchors": self.marker_anchors.tolist(),
        }
        Path(path).write_text(json.dumps(data, indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "BoardGeometry":
        data = json.loads(Path(path).read_text())
        return cls(
            square_size=data["square_size"],
            marker_anchors=np.asarray(data["marker_anchors"], dtype=float),
        )


@dataclass(frozen=True)
class BoardFrame:
    """The fitted board pose along with its 81 corner and 64 center points."""

    pose: Pose
    corners: np.ndarray  # 81 x 3, row-major over (rank_line, file_line)
    centers: np.ndarray  # 64 x 3, index = rank*8 + file
    residual: float  # RMS anchor-to-measurement distance, meters
    square_size: float

    def __post_init__(self):
        for name in ("corners", "centers"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _grid_points(geometry: BoardGeometry, pose: Pose):
    s = geometry.square_size
    corners = np.array([[f * s, r * s, 0.0] for r in range(9) for f in range(9)])
    centers = np.array(
        [[(f + 0.5) * s, (r + 0.5) * s, 0.0] for r in range(8) for f in range(8)]
    )
    return pose.transform(corners), pose.transform(centers)


def registration_cost(pose: Pose, anchors: np.ndarray, measured: np.ndarray) -> float:
    """Sum of squared anchor-to-measurement distances under the pose."""
    delta = pose.transform(anchors) - measured
    return float(np.sum(delta * delta))


def perturbed_pose(pose: Pose, axis: int, amount: float, rotational: bool) -> Pose:
    """The pose nudged by a small delta on one translation or rotation axis."""
    if rotational:
        delta = np.zeros(3)
        delta[axis] = amount
        return Pose(rotvec_to_matrix(delta) @ pose.rotation, pose.translation)
    translation = pose.translation.copy()
    translation[axis] += amount
    return Pose(pose.rotation, translation)


def _initial_pose(anchors: np.ndarray, measured: np.ndarray) -> Pose:
    """Centroid plus best-fit-plane initialization (both normal signs tried)."""
    centroid_a = anchors.mean(axis=0)
    centroid_m = measured.mean(axis=0)
    _, _, vt = np.linalg.svd(measured - centroid_m)
    normal = vt[-1]

    base_dir = anchors[0] - centroid_a
    base_dir = base_dir / np.linalg.norm(base_dir)
    base_perp = np.cross(np.array([0.0, 0.0, 1.0]), base_dir)
    board_basis = np.column_stack([base_dir, base_perp, [0.0, 0.0, 1.0]])

    best = None
    for sign in (1.0, -1.0):
        n = sign * normal
        u = measured[0] - centroid_m
        u = u - (u @ n) * n
        norm_u = np.linalg.norm(u)
        if norm_u < 1e-12:
            continue
        u = u / norm_u
        w = np.cross(n, u)
        world_basis = np.column_stack([u, w, n])
        rotation = world_basis @ board_basis.T
        # re-orthonormalize against accumulated rounding
        uu, _, vv = np.linalg.svd(rotation)
        rotation = uu @ np.diag([1.0, 1.0, np.linalg.det(uu @ vv)]) @ vv
        pose = Pose(rotation, centroid_m - rotation @ centroid_a)
        cost = registration_cost(pose, anchors, measured)
        if best is None or cost < best[0]:
            best = (cost, pose)
    if best is None:
        raise DegenerateMarkers("cannot build an initial in-plane frame")
    return best[1]


def fit_board_grid(
    marker_poses: Union[Sequence[Pose], np.ndarray],
    geometry: BoardGeometry,
) -> BoardFrame:
    """Fit the 6-DoF board pose whose anchors best match the marker centers.

    Accepts either marker Poses (their translations are used) or an Nx3
    array of center points, paired with geometry.marker_anchors by index.
    Levenberg-Marquardt with a numeric Jacobian refines the centroid/plane
    initialization; the returned frame carries the 81 corner and 64 center
    coordinates on the fitted plane and the RMS residual in meters.
    """
    if len(marker_poses) and isinstance(marker_poses[0], Pose):
        measured = np.array([p.translation for p in marker_poses])
    else:
        measured = np.asarray(marker_poses, dtype=float).reshape(-1, 3)
    anchors = np.asarray(geometry.marker_anchors, dtype=float)
    if len(measured) != len(anchors):
        raise ValueError(
            f"{len(measured)} measurements for {len(anchors)} anchors"
        )
    if len(measured) < 3:
        raise DegenerateMarkers("need at least three marker centers")
    centered = measured - measured.mean(axis=0)
    singular = np.linalg.svd(centered, compute_uv=False)
    if singular[1] < 1e-9 * max(singular[0], 1.0):
        raise DegenerateMarkers("marker centers are collinear")

    initial = _initial_pose(anchors, measured)

    def residual(x):
        pose = Pose(rotvec_to_matrix(x[:3]), x[3:])
        return (pose.transform(anchors) - measured).ravel()

    x0 = np.concatenate([initial.rotvec, initial.translation])
    result = levenberg_marquardt(residual, x0, max_iterations=100)
    pose = Pose(rotvec_to_matrix(result.x[:3]), result.x[3:])
    corners, centers = _grid_points(geometry, pose)
    rms = float(np.sqrt(result.cost / len(anchors)))
    return BoardFrame(pose, corners, centers, rms, geometry.square_size)


def square_center(frame: BoardFrame, square: Square) -> np.ndarray:
    """The 3D center of a square in the frame's reference coordinates."""
    return frame.centers[square.index].copy()


def board_frame_from_pose(
    pose: Pose, geometry: BoardGeometry, residual: float = 0.0
) -> BoardFrame:
    """A BoardFrame with its grid laid out under a known pose; used to
    re-express a camera-frame fit in another reference frame."""
    corners, centers = _grid_points(geometry, pose)
    return BoardFrame(pose, corners, centers, residual, geometry.square_size)
