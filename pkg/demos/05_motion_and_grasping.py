"""
Motion planning and grasping
============================

Encoded move commands become waypoint plans and limit-respecting
trajectories; the grasp model turns positional error into the
accurate / remedied / missed categories.
"""

import numpy as np

from chessarm.board import parse_san, standard_start
from chessarm.geometry import BoardGeometry, fit_board_grid
from chessarm.motion import (
    GraspModel,
    MotionLimits,
    categorize_grasp_trials,
    correct_grasp_rate,
    decode_move,
    encode_move,
    grasp_target,
    plan_waypoints,
    simulate_grasp_trial,
    time_parameterize,
)

geometry = BoardGeometry()
frame = fit_board_grid(geometry.marker_anchors.copy(), geometry)
limits = MotionLimits()
state = standard_start()

############################################################
# The nine-character command: four square characters plus flag slots for
# jump, capture, castling, en passant, and promotion.

for san_text in ("e4", "Nf3"):
    move = parse_san(state, san_text)
    print(f"{san_text:>4} encodes as {encode_move(move, state)}")

############################################################
# A knight hop plans taller and therefore takes longer than a pawn slide.

slide = plan_waypoints(decode_move("e2e400000"), frame, state.placement, limits)
jump = plan_waypoints(decode_move("g1f310000"), frame, state.placement, limits)
t_slide = time_parameterize(slide, limits)
t_jump = time_parameterize(jump, limits)
print(f"slide: {len(slide)} waypoints, {t_slide.total_duration:.2f} s")
print(f"jump:  {len(jump)} waypoints, {t_jump.total_duration:.2f} s")

peak_v = max(
    np.linalg.norm(t_jump.sample(t)[1])
    for t in np.arange(0, t_jump.total_duration, 0.001)
)
print(f"peak sampled speed {peak_v:.3f} m/s vs limit {limits.v_max} m/s")

############################################################
# Grasping: aim past the systematic error, then see how far off-center a
# piece can sit before a 10-trial block stops being 'accurate'.

model = GraspModel()
print("aim point for a piece at the origin:", grasp_target(np.zeros(3), model))
for offset_cm in (0.0, 0.4, 0.625, 1.0, 2.0):
    offset = (offset_cm / 100.0, 0.0)
    outcomes = [simulate_grasp_trial(offset, model, seed=100 + i) for i in range(10)]
    rate = correct_grasp_rate(offset, model, trials=1000, seed=11)
    print(
        f"offset {offset_cm:5.3f} cm: block -> {categorize_grasp_trials(outcomes):>8}, "
        f"long-run correct rate {rate:.1%}"
    )
