"""Per-square crop windows computed from the fitted board and a view pose."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..board.core import ALL_SQUARES, Square
from ..geometry.camera import BehindCamera, CameraModel, project
from ..geometry.fit import BoardFrame
from ..geometry.pose import Pose


class BoardNotVisible(ValueError):
    """Some board corner is behind the camera or a window clamps to nothing."""


@dataclass(frozen=True)
class CropWindow:
    """Pixel bounding box for one square, tall enough to include its piece."""

    square: Square
    rect: Tuple[int, int, int, int]  # left, top, width, height
    side_px: float = 0.0  # projected square side, used to scale shifts

    def __post_init__(self):
        left, top, width, height = self.rect
        if width <= 0 or height <= 0:
            raise ValueError(f"window for {self.square.name} has no area: {self.rect}")


def _clamp_rect(left, top, right, bottom, image_size):
    width, height = image_size
    left = max(0, min(int(round(left)), width - 1))
    right = max(0, min(int(round(right)), width))
    top = max(0, min(int(round(top)), height - 1))
    bottom = max(0, min(int(round(bottom)), height))
    return left, top, right - left, bottom - top


def compute_crop_windows(
    frame: BoardFrame,
    camera: CameraModel,
    view_pose: Pose,
    extension_factor: float = 2.0,
) -> List[CropWindow]:
    """One window per square: the projected cell's bounding box, extended
    upward (toward smaller image rows) by extension_factor times the
    projected square height so tall pieces stay inside, then clamped to
    the image.  view_pose maps frame coordinates into the camera frame.

    Raises BoardNotVisible when a corner projects behind the camera or a
    window clamps away entirely.
    """
    corners = frame.corners.reshape(9, 9, 3)
    projected = np.empty((9, 9, 2))
    for r in range(9):
        for f in range(9):
            try:
                projected[r, f] = project(camera, view_pose, corners[r, f])
            except BehindCamera as exc:
                raise BoardNotVisible(str(exc)) from None
    windows = []
    for square in ALL_SQUARES:
        quad = np.array(
            [
                projected[square.rank, square.file],
                projected[square.rank, square.file + 1],
                projected[square.rank + 1, square.file],
                projected[square.rank + 1, square.file + 1],
            ]
        )
        left, top = quad.min(axis=0)
        right, bottom = quad.max(axis=0)
        height = bottom - top
        side = float((right - left + height) / 2.0)
        top -= extension_factor * height
        rect = _clamp_rect(left, top, right, bottom, camera.image_size)
        if rect[2] <= 0 or rect[3] <= 0:
            raise BoardNotVisible(f"square {square.name} projects outside the image")
        windows.append(CropWindow(square, rect, side_px=side))
    return windows


_DIRECTIONS = {
    "up": (0, -1),
    "down": (0, 1),
    "left": (-1, 0),
    "right": (1, 0),
}


def shift_crop_windows(
    windows: List[CropWindow], direction: str, fraction: float = 0.25
) -> List[CropWindow]:
    """Translate every window by fraction of its own projected side length."""
    if direction not in _DIRECTIONS:
        raise ValueError(f"direction must be one of {sorted(_DIRECTIONS)}")
    dx, dy = _DIRECTIONS[direction]
    shifted = []
    for window in windows:
        left, top, width, height = window.rect
        step = fraction * window.side_px
        shifted.append(
            CropWindow(
                window.square,
                (int(round(left + dx * step)), int(round(top + dy * step)), width, height),
                side_px=window.side_px,
            )
        )
    return shifted
