"""Waypoint plan shapes, trajectory limits, and the grasp model."""

import numpy as np
import pytest

from chessarm.board import Piece, Placement, Square, parse_fen, standard_start
from chessarm.geometry import BoardGeometry, fit_board_grid
from chessarm.motion import (
    DegeneratePath,
    GraspModel,
    GraspOutcome,
    MotionLimits,
    OutOfReach,
    OutsideWorkspace,
    Waypoint,
    WrongTrialCount,
    categorize_grasp_trials,
    correct_grasp_rate,
    decode_move,
    grasp_target,
    plan_waypoints,
    simulate_grasp_trial,
    time_parameterize,
)

LIMITS = MotionLimits()


@pytest.fixture(scope="module")
def frame():
    geometry = BoardGeometry()
    return fit_board_grid(geometry.marker_anchors.copy(), geometry)


class TestPlanShapes:
    def test_slide_plan(self, frame):
        plan = plan_waypoints(decode_move("e2e400000"), frame, standard_start().placement, LIMITS)
        assert len(plan) == 6
        assert [w.tag for w in plan] == [
            "approach", "descend", "grasp", "transit", "release", "retreat",
        ]
        transit = plan[3]
        assert transit.position[2] == pytest.approx(LIMITS.slide_height)
        assert transit.gripper == "closed"

    def test_jump_plan_peaks_at_jump_height(self, frame):
        plan = plan_waypoints(decode_move("g1f310000"), frame, standard_start().placement, LIMITS)
        top = max(w.position[2] for w in plan)
        assert top == pytest.approx(LIMITS.jump_height)

    def test_capture_removes_victim_first(self, frame):
        placement = parse_fen("4k3/8/8/3p4/4P3/8/8/4K3", mode="placement")
        plan = plan_waypoints(decode_move("e4d501000"), frame, placement, LIMITS)
        disposal = [i for i, w in enumerate(plan) if w.tag == "disposal"]
        mover_approach = [i for i, w in enumerate(plan) if w.tag == "approach"][1]
        assert disposal and disposal[0] < mover_approach
        assert np.allclose(plan[disposal[0]].position, LIMITS.bin_location)

    def test_castling_moves_king_then_rook(self, frame):
        placement = parse_fen("4k3/8/8/8/8/8/8/4K2R", mode="placement")
        plan = plan_waypoints(decode_move("e1g100100"), frame, placement, LIMITS)
        grasps = [i for i, w in enumerate(plan) if w.tag == "grasp"]
        assert len(grasps) == 2
        king_grasp, rook_grasp = grasps
        e1 = frame.centers[Square.from_name("e1").index]
        h1 = frame.centers[Square.from_name("h1").index]
        assert np.allclose(plan[king_grasp].position[:2], e1[:2])
        assert np.allclose(plan[rook_grasp].position[:2], h1[:2])
        # the king now sits on g1, so the rook leaps over it
        rook_top = max(w.position[2] for w in plan[rook_grasp:])
        assert rook_top == pytest.approx(LIMITS.jump_height)

    def test_en_passant_moves_pawn_then_clears_victim(self, frame):
        placement = parse_fen("4k3/8/8/8/4pP2/8/8/4K3", mode="placement")
        plan = plan_waypoints(decode_move("e4f301010"), frame, placement, LIMITS)
        disposal = [i for i, w in enumerate(plan) if w.tag == "disposal"]
        first_release = [i for i, w in enumerate(plan) if w.tag == "release"][0]
        assert disposal and first_release < disposal[0]

    def test_out_of_reach(self, frame):
        tight = MotionLimits(reach_limit=0.3)
        with pytest.raises(OutOfReach):
            plan_waypoints(decode_move("e2e400000"), frame, standard_start().placement, tight)

    def test_outside_workspace(self, frame):
        shrunk = MotionLimits(workspace_box=((0.0, 0.0, 0.0), (0.2, 0.2, 0.2)))
        with pytest.raises(OutsideWorkspace):
            plan_waypoints(decode_move("e2e400000"), frame, standard_start().placement, shrunk)


def straight_line(length, v_max, a_max):
    limits = MotionLimits(v_max=v_max, a_max=a_max)
    wps = [
        Waypoint(np.zeros(3), "open", "approach"),
        Waypoint(np.array([length, 0.0, 0.0]), "open", "transit"),
    ]
    return time_parameterize(wps, limits), limits


class TestTrajectory:
    def test_triangle_profile_boundary(self):
        trajectory, _ = straight_line(1.0, v_max=1.0, a_max=1.0)
        assert trajectory.total_duration == pytest.approx(2.0)

    def test_trapezoid_with_cruise(self):
        trajectory, _ = straight_line(4.0, v_max=1.0, a_max=1.0)
        assert trajectory.total_duration == pytest.approx(5.0)

    def test_numeric_integration_recovers_length(self):
        trajectory, _ = straight_line(1.0, v_max=1.0, a_max=1.0)
        dt = 1e-4
        times = np.arange(0.0, trajectory.total_duration + dt, dt)
        speeds = np.array([np.linalg.norm(trajectory.sample(t)[1]) for t in times])
        distance = dt * (speeds.sum() - 0.5 * (speeds[0] + speeds[-1]))
        assert distance == pytest.approx(1.0, abs=1e-3)

    def test_zero_length_path_rejected(self):
        wps = [Waypoint(np.zeros(3), "open", "a"), Waypoint(np.zeros(3), "open", "b")]
        with pytest.raises(DegeneratePath):
            time_parameterize(wps, LIMITS)

    def test_limits_and_rest_endpoints(self, frame):
        plan = plan_waypoints(decode_move("g1f310000"), frame, standard_start().placement, LIMITS)
        trajectory = time_parameterize(plan, LIMITS)
        for t in np.arange(0.0, trajectory.total_duration + 1e-3, 1e-3):
            _, velocity, acceleration, _ = trajectory.sample(t)
            assert np.linalg.norm(velocity) <= LIMITS.v_max + 1e-9
            assert np.linalg.norm(acceleration) <= LIMITS.a_max + 1e-9
        assert np.allclose(trajectory.sample(0.0)[1], 0.0)
        assert np.allclose(trajectory.sample(trajectory.total_duration)[1], 0.0)

    def test_duration_is_sum_of_segments(self, frame):
        plan = plan_waypoints(decode_move("e2e400000"), frame, standard_start().placement, LIMITS)
        trajectory = time_parameterize(plan, LIMITS)
        assert trajectory.total_duration == pytest.approx(
            sum(s.duration for s in trajectory.segments)
        )

    def test_jump_takes_longer_than_slide(self, frame):
        placement = Placement.empty().with_cells(
            {
                Square.from_name("e1").index: Piece.from_letter("K"),
                Square.from_name("e8").index: Piece.from_letter("k"),
                Square.from_name("d2").index: Piece.from_letter("Q"),
            }
        )
        slide = plan_waypoints(decode_move("d2d700000"), frame, placement, LIMITS)
        jump = plan_waypoints(decode_move("d2d710000"), frame, placement, LIMITS)
        t_slide = time_parameterize(slide, LIMITS).total_duration
        t_jump = time_parameterize(jump, LIMITS).total_duration
        assert t_jump > t_slide

    def test_csv_rows_cover_duration(self, frame):
        plan = plan_waypoints(decode_move("e2e400000"), frame, standard_start().placement, LIMITS)
        trajectory = time_parameterize(plan, LIMITS)
        rows = trajectory.csv_rows(dt=0.05)
        assert rows[0][0] == 0.0
        assert rows[-1][0] == pytest.approx(trajectory.total_duration)
        assert {r[4] for r in rows} == {"open", "closed"}


class TestGrasp:
    def test_compensation_offsets(self):
        target = grasp_target(np.zeros(3), GraspModel())
        assert np.allclose(target, [0.0055, 0.01, 0.0])

    def test_zero_compensation_identity(self):
        model = GraspModel(compensation=(0.0, 0.0), systematic_error=(0.0, 0.0))
        assert np.allclose(grasp_target(np.array([0.1, 0.2, 0.0]), model), [0.1, 0.2, 0.0])

    def test_linearity(self):
        model = GraspModel()
        p = np.array([0.05, 0.07, 0.0])
        q = np.array([0.01, -0.03, 0.0])
        assert np.allclose(grasp_target(p + q, model) - grasp_target(p, model), q)

    def test_deterministic_trials(self):
        model = GraspModel()
        a = simulate_grasp_trial((0.005, 0.0), model, seed=42)
        b = simulate_grasp_trial((0.005, 0.0), model, seed=42)
        assert a == b

    def test_zero_variance_outcomes(self):
        model = GraspModel(anisotropy=(0.0, 0.0))
        assert simulate_grasp_trial((0.0, 0.0), model, 1) is GraspOutcome.ACCURATE_GRAB
        assert simulate_grasp_trial((0.05, 0.0), model, 1) is GraspOutcome.MISS

    def test_categorize_thresholds(self):
        ok, slid, miss = GraspOutcome.ACCURATE_GRAB, GraspOutcome.SLID_IN_GRAB, GraspOutcome.MISS
        assert categorize_grasp_trials([ok] * 10) == "accurate"
        assert categorize_grasp_trials([ok] * 9 + [miss]) == "remedied"
        assert categorize_grasp_trials([slid] * 8 + [miss] * 2) == "remedied"
        assert categorize_grasp_trials([ok] * 7 + [miss] * 3) == "missed"
        assert categorize_grasp_trials([miss] * 10) == "missed"
        with pytest.raises(WrongTrialCount):
            categorize_grasp_trials([ok] * 9)

    def test_rate_monotone_and_matches_gaussian_tail(self):
        from scipy import integrate, stats

        model = GraspModel()
        offsets = [(0.0, 0.0), (0.00625, 0.0), (0.02, 0.0)]
        rates = [correct_grasp_rate(off, model, trials=1000, seed=7) for off in offsets]
        assert rates[0] >= rates[1] >= rates[2]

        def analytic(offset):
            sx, sy = model.anisotropy
            r = model.r_remedy

            def density(y, x):
                return stats.norm.pdf(x, 0.0, sx) * stats.norm.pdf(y, 0.0, sy)

            prob, _ = integrate.dblquad(
                density,
                offset[0] - r,
                offset[0] + r,
                lambda x: offset[1] - np.sqrt(max(r**2 - (x - offset[0]) ** 2, 0.0)),
                lambda x: offset[1] + np.sqrt(max(r**2 - (x - offset[0]) ** 2, 0.0)),
            )
            return prob

        for offset, rate in zip(offsets, rates):
            assert rate == pytest.approx(analytic(offset), abs=0.05)
