"""The simulated table, camera rig, and synthetic board calibration."""

from __future__ import annotations

import threading
from typing import List, Tuple

import numpy as np

from ..board.core import GameState, Move, Placement
from ..board.moves import _moved_cells
from ..geometry.camera import CameraModel
from ..geometry.fit import BoardFrame, BoardGeometry, board_frame_from_pose, fit_board_grid
from ..geometry.markers import estimate_marker_pose, synthesize_observation
from ..geometry.pose import Pose, look_at_pose
from ..perception.backends import CaptureContext
from ..perception.crops import CropWindow, compute_crop_windows
from .config import CaptureGeometry


class SimulatedTable:
    """The physical board the camera "sees": a placement humans and the
    robot mutate, independent of the pipeline's inferred game state."""

    def __init__(self, placement: Placement):
        self._placement = placement
        self._lock = threading.Lock()

    def placement(self) -> Placement:
        with self._lock:
            return self._placement

    def set_placement(self, placement: Placement) -> None:
        with self._lock:
            self._placement = placement

    def play(self, state_before: GameState, move: Move) -> None:
        """Physically realize a move that is legal in state_before."""
        with self._lock:
            self._placement = Placement(
                _moved_cells(self._placement.cells, move, state_before.side_to_move)
            )


def synthetic_calibration(
    camera: CameraModel,
    geometry: BoardGeometry,
    true_board_pose: Pose,
    capture: CaptureGeometry,
    noise_px: float = 0.0,
    rng=None,
) -> BoardFrame:
    """The Hovering-pose localization pass, fully simulated.

    Markers are rendered through the camera from straight above the board,
    their poses re-estimated from the pixels, the grid fitted in the camera
    frame, and the result re-expressed in the robot-base frame.
    """
    center_board = np.array([4 * geometry.square_size, 4 * geometry.square_size, 0.0])
    center_base = true_board_pose.transform(center_board)
    eye = center_base + np.array([0.0, 0.0, capture.hover_height])
    view = look_at_pose(eye, center_base, up_hint=(0.0, 1.0, 0.0))

    marker_rotation_cam = view.rotation @ true_board_pose.rotation
    centers_camera = []
    for anchor in geometry.marker_anchors:
        marker_base = true_board_pose.transform(anchor)
        marker_pose_cam = Pose(marker_rotation_cam, view.transform(marker_base))
        obs, _ = synthesize_observation(0, 0.05, marker_pose_cam, camera, noise_px, rng)
        centers_camera.append(estimate_marker_pose(obs, camera).translation)
    fitted_cam = fit_board_grid(np.array(centers_camera), geometry)
    pose_base = view.inverse().compose(fitted_cam.pose)
    return board_frame_from_pose(pose_base, geometry, fitted_cam.residual)


class CaptureRig:
    """Produces crop windows per attempt kind and counts attempts globally,
    which keeps the noisy oracle's error draws unique across the session."""

    def __init__(
        self,
        camera: CameraModel,
        frame: BoardFrame,
        capture: CaptureGeometry,
        geometry: BoardGeometry,
    ):
        self.camera = camera
        self.frame = frame
        self.capture = capture
        self._counter = 0
        center = frame.centers.mean(axis=0)
        ready_eye = center + np.asarray(capture.ready_offset)
        viewpoint_eye = ready_eye + np.asarray(capture.viewpoint_shift)
        self.ready_view = look_at_pose(ready_eye, center, up_hint=(0.0, 0.0, 1.0))
        self.viewpoint_view = look_at_pose(viewpoint_eye, center, up_hint=(0.0, 0.0, 1.0))
        self._windows = {
            "ready": compute_crop_windows(frame, camera, self.ready_view),
            "viewpoint": compute_crop_windows(frame, camera, self.viewpoint_view),
        }

    def __call__(self, kind: str, ordinal: int) -> Tuple[List[CropWindow], CaptureContext]:
        windows = self._windows["viewpoint" if kind == "viewpoint" else "ready"]
        context = CaptureContext(
            attempt=kind,
            attempt_index=self._counter,
            image_ref=f"capture-{self._counter:05d}-{kind}",
        )
        self._counter += 1
        return windows, context

    @property
    def attempts_taken(self) -> int:
        return self._counter
