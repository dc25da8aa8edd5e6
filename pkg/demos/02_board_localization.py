"""
3D board localization
=====================

Markers are rendered through a synthetic camera, their poses re-estimated
from pixels, and the full square grid fitted by damped least squares.
The exercise repeats with pixel noise to show millimeter-level stability.
"""

import numpy as np

from chessarm.board import Square
from chessarm.geometry import (
    BoardGeometry,
    CameraModel,
    Pose,
    estimate_marker_pose,
    fit_board_grid,
    rotvec_to_matrix,
    square_center,
    synthesize_observation,
)

camera = CameraModel(fx=1200.0, fy=1200.0, cx=960.0, cy=540.0)
geometry = BoardGeometry()
rng = np.random.default_rng(42)

############################################################
# Ground truth: the board sits 0.6 m out, slightly tilted.

truth = Pose(rotvec_to_matrix([0.05, -0.08, 0.3]), np.array([-0.1, 0.05, 0.6]))
marker_poses = [Pose(truth.rotation, truth.transform(a)) for a in geometry.marker_anchors]

############################################################
# Noiseless pass: project the marker corners, estimate each marker pose,
# fit the grid, and compare a few square centers with the truth.

centers = []
for pose in marker_poses:
    obs, _ = synthesize_observation(0, 0.05, pose, camera)
    centers.append(estimate_marker_pose(obs, camera).translation)
frame = fit_board_grid(np.array(centers), geometry)
print(f"noiseless residual: {frame.residual:.2e} m")

for name in ("a1", "e4", "h8"):
    fitted = square_center(frame, Square.from_name(name))
    exact = truth.transform(
        [
            (Square.from_name(name).file + 0.5) * geometry.square_size,
            (Square.from_name(name).rank + 0.5) * geometry.square_size,
            0.0,
        ]
    )
    print(f"  {name}: center error {np.linalg.norm(fitted - exact) * 1000:.4f} mm")

############################################################
# Realistic pass: half a pixel of corner noise.  Square centers stay within
# a couple of millimeters, which is what piece grasping needs.

errors = []
for _ in range(100):
    noisy_centers = []
    for pose in marker_poses:
        obs, _ = synthesize_observation(0, 0.05, pose, camera, noise_px=0.5, rng=rng)
        noisy_centers.append(estimate_marker_pose(obs, camera).translation)
    noisy_frame = fit_board_grid(np.array(noisy_centers), geometry)
    truth_centers = truth.transform(
        np.array(
            [
                [(sq.file + 0.5) * geometry.square_size, (sq.rank + 0.5) * geometry.square_size, 0.0]
                for sq in [Square.from_index(i) for i in range(64)]
            ]
        )
    )
    errors.append(np.median(np.linalg.norm(noisy_frame.centers - truth_centers, axis=1)))

print(f"median square-center error over 100 noisy trials: {np.median(errors) * 1000:.3f} mm")
