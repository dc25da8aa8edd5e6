"""Planar-marker pose estimation from its four imaged corners."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .camera import CameraModel, project
from .optimize import levenberg_marquardt
from .pose import Pose, rotvec_to_matrix


class DegenerateCorners(ValueError):
    """The four corners do not span a proper quadrilateral."""


@dataclass(frozen=True)
class MarkerObservation:
    marker_id: int
    corners_px: np.ndarray  # 4x2 pixel coordinates in consistent winding order
    marker_length: float  # meters

    def __post_init__(self):
        corners = np.asarray(self.corners_px, dtype=float).reshape(4, 2)
        corners.flags.writeable = False
        object.__setattr__(self, "corners_px", corners)
        if self.marker_length <= 0:
            raise ValueError("marker_length must be positive")


def marker_corners_3d(marker_length: float) -> np.ndarray:
    """Canonical corner coordinates in the marker frame, counter-clockwise
    from the top-left, z = 0."""
    h = marker_length / 2.0
    return np.array(
        [
            [-h, h, 0.0],
            [h, h, 0.0],
            [h, -h, 0.0],
            [-h, -h, 0.0],
        ]
    )


def _collinear(points: np.ndarray) -> bool:
    centered = points - points.mean(axis=0)
    singular = np.linalg.svd(centered, compute_uv=False)
    return singular[1] < 1e-9 * max(singular[0], 1.0)


def _homography(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """DLT homography mapping src (x, y) to dst (x, y), both 4x2."""
    rows = []
    for (x, y), (u, v) in zip(src, dst):
        rows.append([-x, -y, -1, 0, 0, 0, u * x, u * y, u])
        rows.append([0, 0, 0, -x, -y, -1, v * x, v * y, v])
    _, _, vt = np.linalg.svd(np.array(rows))
    h = vt[-1].reshape(3, 3)
    return h / h[2, 2]


def estimate_marker_pose(obs: MarkerObservation, camera: CameraModel) -> Pose:
    """Marker-to-camera pose from its four imaged corners.

    The homography from the marker's canonical square to the undistorted
    normalized image points is decomposed into rotation and translation,
    then refined by damped Gauss-Newton on the full-distortion pixel
    reprojection error.
    """
    corners = obs.corners_px
    if _collinear(corners):
        raise DegenerateCorners("marker corners are collinear")
    normalized = np.array([camera.pixel_to_normalized(u, v) for u, v in corners])
    object_points = marker_corners_3d(obs.marker_length)
    h = _homography(object_points[:, :2], normalized)

    h1, h2, h3 = h[:, 0], h[:, 1], h[:, 2]
    scale = 2.0 / (np.linalg.norm(h1) + np.linalg.norm(h2))
    r1, r2, t = scale * h1, scale * h2, scale * h3
    if t[2] < 0:  # the marker must sit in front of the camera
        r1, r2, t = -r1, -r2, -t
    rough = np.column_stack([r1, r2, np.cross(r1, r2)])
    u, _, vt = np.linalg.svd(rough)
    rotation = u @ np.diag([1.0, 1.0, np.linalg.det(u @ vt)]) @ vt

    def residual(x):
        pose = Pose(rotvec_to_matrix(x[:3]), x[3:])
        out = np.empty(8)
        for i, point in enumerate(object_points):
            out[2 * i : 2 * i + 2] = project(camera, pose, point) - corners[i]
        return out

    x0 = np.concatenate([Pose(rotation, t).rotvec, t])
    result = levenberg_marquardt(residual, x0)
    return Pose(rotvec_to_matrix(result.x[:3]), result.x[3:])


def reprojection_rms(
    obs: MarkerObservation, camera: CameraModel, pose: Pose
) -> float:
    points = marker_corners_3d(obs.marker_length)
    errors = [
        np.linalg.norm(project(camera, pose, p) - c) for p, c in zip(points, obs.corners_px)
    ]
    return float(np.sqrt(np.mean(np.square(errors))))


def synthesize_observation(
    marker_id: int,
    marker_length: float,
    pose: Pose,
    camera: CameraModel,
    noise_px: float = 0.0,
    rng=None,
) -> Tuple[MarkerObservation, np.ndarray]:
    """Project the canonical corners through a known pose, optionally with
    Gaussian pixel noise.  Returns the observation and the clean pixels."""
    points = marker_corners_3d(marker_length)
    clean = np.array([project(camera, pose, p) for p in points])
    noisy = clean.copy()
    if noise_px > 0.0:
        if rng is None:
            rng = np.random.default_rng()
        noisy = clean + rng.normal(0.0, noise_px, clean.shape)
    return MarkerObservation(marker_id, noisy, marker_length), clean
