"""Rigid transforms with rotation-matrix and axis-angle views."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Pose:
    """object -> reference transform: p_ref = rotation @ p_obj + translation."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rotation = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        translation = np.asarray(self.translation, dtype=float).reshape(3)
        if abs(np.linalg.det(rotation) - 1.0) > 1e-9:
            raise ValueError("rotation determinant must be +1")
        if np.max(np.abs(rotation @ rotation.T - np.eye(3))) > 1e-8:
            raise ValueError("rotation must be orthonormal")
        rotation.flags.writeable = False
        translation.flags.writeable = False
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_rotvec(cls, rotvec, translation) -> "Pose":
        return cls(rotvec_to_matrix(np.asarray(rotvec, dtype=float)), translation)

    @property
    def rotvec(self) -> np.ndarray:
        return matrix_to_rotvec(self.rotation)

    def transform(self, points) -> np.ndarray:
        """Apply to one point (3,) or many (N, 3)."""
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            return self.rotation @ points + self.translation
        return points @ self.rotation.T + self.translation

    def compose(self, other: "Pose") -> "Pose":
        """self after other: (self*other).transform(p) == self(other(p))."""
        return Pose(self.rotation @ other.rotation, self.rotation @ other.translation + self.translation)

    def inverse(self) -> "Pose":
        rt = self.rotation.T
        return Pose(rt, -rt @ self.translation)


def look_at_pose(camera_position, target, up_hint=(0.0, 1.0, 0.0)) -> Pose:
    """The world->camera pose for a camera at `camera_position` whose optical
    axis points at `target`.  up_hint picks the image-x direction; it must
    not be parallel to the viewing direction."""
    position = np.asarray(camera_position, dtype=float)
    forward = np.asarray(target, dtype=float) - position
    norm = np.linalg.norm(forward)
    if norm < 1e-12:
        raise ValueError("camera position and target coincide")
    z_cam = forward / norm
    x_cam = np.cross(z_cam, np.asarray(up_hint, dtype=float))
    x_norm = np.linalg.norm(x_cam)
    if x_norm < 1e-12:
        raise ValueError("up_hint is parallel to the viewing direction")
    x_cam = x_cam / x_norm
    y_cam = np.cross(z_cam, x_cam)
    rotation = np.vstack([x_cam, y_cam, z_cam])
    return Pose(rotation, -rotation @ position)


def rotvec_to_matrix(rotvec: np.ndarray) -> np.ndarray:
    """Rodrigues: axis-angle vector (axis * angle) to rotation matrix."""
    angle = np.linalg.norm(rotvec)
    if angle < 1e-12:
        return np.eye(3)
    axis = rotvec / angle
    k = np.array(
        [
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ]
    )
    return np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)


def matrix_to_rotvec(matrix: np.ndarray) -> np.ndarray:
    """Inverse Rodrigues, stable near zero and pi."""
    trace = np.clip((np.trace(matrix) - 1.0) / 2.0, -1.0, 1.0)
    angle = np.arccos(trace)
    if angle < 1e-12:
        return np.zeros(3)
    if np.pi - angle < 1e-6:
        # near pi the off-diagonal form degenerates; recover axis from R + I
        m = (matrix + np.eye(3)) / 2.0
        axis = np.sqrt(np.maximum(np.diagonal(m), 0.0))
        # fix signs using the largest component
        i = int(np.argmax(axis))
        if axis[i] > 0:
            for j in range(3):
                if j != i and m[i, j] < 0:
                    axis[j] = -axis[j]
        axis = axis / np.linalg.norm(axis)
        return axis * angle
    axis = (
        np.array(
            [
                matrix[2, 1] - matrix[1, 2],
                matrix[0, 2] - matrix[2, 0],
                matrix[1, 0] - matrix[0, 1],
            ]
        )
        / (2.0 * np.sin(angle))
    )
    return axis * angle
