"""Camera projection, marker pose estimation, and board grid fitting."""

from .camera import BehindCamera, CameraModel, project, project_many
from .fit import (
    BoardFrame,
    BoardGeometry,
    DegenerateMarkers,
    board_frame_from_pose,
    default_marker_anchors,
    fit_board_grid,
    perturbed_pose,
    registration_cost,
    square_center,
)
from .markers import (
    DegenerateCorners,
    MarkerObservation,
    estimate_marker_pose,
    marker_corners_3d,
    reprojection_rms,
    synthesize_observation,
)
from .optimize import FitResult, NoConvergence, levenberg_marquardt, numeric_jacobian
from .pose import Pose, look_at_pose, matrix_to_rotvec, rotvec_to_matrix

__all__ = [
    "BehindCamera",
    "BoardFrame",
    "BoardGeometry",
    "CameraModel",
    "DegenerateCorners",
    "DegenerateMarkers",
    "FitResult",
    "MarkerObservation",
    "NoConvergence",
    "Pose",
    "board_frame_from_pose",
    "default_marker_anchors",
    "estimate_marker_pose",
    "fit_board_grid",
    "levenberg_marquardt",
    "look_at_pose",
    "marker_corners_3d",
    "matrix_to_rotvec",
    "numeric_jacobian",
    "perturbed_pose",
    "project",
    "project_many",
    "registration_cost",
    "reprojection_rms",
    "rotvec_to_matrix",
    "square_center",
    "synthesize_observation",
]
