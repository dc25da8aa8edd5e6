"""Pinhole camera with radial/tangential distortion and calibration file I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple

import numpy as np

from .pose import Pose


class BehindCamera(ValueError):
    """The point has non-positive depth in the camera frame."""


@dataclass(frozen=True)
class CameraModel:
    fx: float
    fy: float
    cx: float
    cy: float
    # k1, k2, k3 radial and p1, p2 tangential
    distortion: Tuple[float, float, float, float, float] = (0.0, 0.0, 0.0, 0.0, 0.0)
    image_size: Tuple[int, int] = (1920, 1080)

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        w, h = self.image_size
        if not (0 <= self.cx < w and 0 <= self.cy < h):
            raise ValueError("principal point must lie inside the image")
        object.__setattr__(self, "distortion", tuple(float(d) for d in self.distortion))

    def distort_normalized(self, xn: float, yn: float) -> Tuple[float, float]:
        k1, k2, k3, p1, p2 = self.distortion
        r2 = xn * xn + yn * yn
        radial = 1.0 + k1 * r2 + k2 * r2 * r2 + k3 * r2 * r2 * r2
        xd = xn * radial + 2.0 * p1 * xn * yn + p2 * (r2 + 2.0 * xn * xn)
        yd = yn * radial + p1 * (r2 + 2.0 * yn * yn) + 2.0 * p2 * xn * yn
        return xd, yd

    def undistort_normalized(self, xd: float, yd: float, iterations: int = 20) -> Tuple[float, float]:
        """Invert the distortion polynomial by fixed-point iteration."""
        k1, k2, k3, p1, p2 = self.distortion
        xn, yn = xd, yd
        for _ in range(iterations):
            r2 = xn * xn + yn * yn
            radial = 1.0 + k1 * r2 + k2 * r2 * r2 + k3 * r2 * r2 * r2
            dx = 2.0 * p1 * xn * yn + p2 * (r2 + 2.0 * xn * xn)
            dy = p1 * (r2 + 2.0 * yn * yn) + 2.0 * p2 * xn * yn
            xn = (xd - dx) / radial
            yn = (yd - dy) / radial
        return xn, yn

    def pixel_to_normalized(self, u: float, v: float) -> Tuple[float, float]:
        return self.undistort_normalized((u - self.cx) / self.fx, (v - self.cy) / self.fy)

    def save(self, path) -> None:
        data = {
            "fx": self.fx,
            "fy": self.fy,
            "cx": self.cx,
            "cy": self.cy,
            "distortion": list(self.distortion),
            "image_size": list(self.image_size),
        }
        Path(path).write_text(json.dumps(data, indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "CameraModel":
        data = json.loads(Path(path).read_text())
        return cls(
            fx=data["fx"],
            fy=data["fy"],
            cx=data["cx"],
            cy=data["cy"],
            distortion=tuple(data.get("distortion", (0.0,) * 5)),
            image_size=tuple(data.get("image_size", (1920, 1080))),
        )


def project(camera: CameraModel, pose: Pose, point) -> np.ndarray:
    """Project an object-frame point to pixel coordinates.

    Pinhole projection with the radial (k1,k2,k3) and tangential (p1,p2)
    terms applied in normalized coordinates.  Raises BehindCamera when the
    transformed point has non-positive depth.
    """
    p_cam = pose.transform(np.asarray(point, dtype=float))
    if p_cam[2] <= 0.0:
        raise BehindCamera(f"point depth {p_cam[2]:.4f} <= 0")
    xn, yn = p_cam[0] / p_cam[2], p_cam[1] / p_cam[2]
    xd, yd = camera.distort_normalized(xn, yn)
    return np.array([camera.fx * xd + camera.cx, camera.fy * yd + camera.cy])


def project_many(camera: CameraModel, pose: Pose, points) -> np.ndarray:
    return np.array([project(camera, pose, p) for p in np.asarray(points, dtype=float)])
