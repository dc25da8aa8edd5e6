"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.  Every tolerance is pinned here; nothing is deferred.
"""

import random
import time
from contextlib import contextmanager

import numpy as np
import pytest

from chessarm.board import (
    apply_move,
    emit_fen,
    import_pgn,
    legal_moves,
    parse_fen,
    standard_start,
)
from chessarm.engine import EngineScore, score_to_winprob
from chessarm.geometry import (
    BoardGeometry,
    Pose,
    fit_board_grid,
    perturbed_pose,
    registration_cost,
    rotvec_to_matrix,
)
from chessarm.interaction import (
    GestureKind,
    GesturePolicy,
    Intent,
    IntentKind,
    MoveAnalysis,
    PAYLOAD_KEYS,
    build_prompt,
    gesture_for_drop,
)
from chessarm.engine import QualityLabel, ScoredLine
from chessarm.motion import (
    GraspModel,
    GraspOutcome,
    categorize_grasp_trials,
    correct_grasp_rate,
    decode_move,
    encode_move,
    plan_waypoints,
    time_parameterize,
)
from chessarm.orchestrator import (
    GamePipeline,
    ScriptedOpponent,
    load_config,
    validate_event_log,
    with_seed,
)
from chessarm.perception import (
    CaptureContext,
    CropWindow,
    NoiseModel,
    build_training_splits,
    generate_dataset_plan,
    make_noisy_oracle,
    perceive_with_correction,
)
from chessarm.board import ALL_SQUARES

from perft_oracle import oracle_apply, perft as oracle_perft


@contextmanager
def criterion(number, title, budget_s):
    started = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE [{number:>2}] FAIL  {title}")
        raise
    elapsed = time.perf_counter() - started
    assert elapsed < budget_s, f"{title}: {elapsed:.1f}s over the {budget_s}s budget"
    print(f"\nACCEPTANCE [{number:>2}] PASS  {title} ({elapsed:.1f}s < {budget_s}s)")


def test_c01_move_format_fidelity():
    with criterion(1, "move-format fidelity", 5):
        cmd = decode_move("g1f310000")
        assert cmd.from_sq.name == "g1" and cmd.to_sq.name == "f3"
        assert cmd.jump and not (cmd.capture or cmd.castling or cmd.en_passant)
        assert cmd.promotion is None
        rng = random.Random(20240601)
        for _ in range(100):
            state = standard_start()
            for _ in range(24):
                moves = legal_moves(state)
                if not moves:
                    break
                for move in moves:
                    text = encode_move(move, state)
                    decoded = decode_move(text)
                    assert decoded.from_sq == move.from_sq
                    assert decoded.to_sq == move.to_sq
                    assert decoded.capture == move.capture
                    assert decoded.castling == move.castling
                    assert decoded.en_passant == move.en_passant
                    assert decoded.promotion == move.promotion
                    assert decoded.text == text
                state = apply_move(state, rng.choice(sorted(moves, key=lambda m: m.uci)))


def test_c02_dataset_generator():
    with criterion(2, "photo-schedule generator", 10):
        base = parse_fen(
            "pppppppp/1nbqkbnr/PPPPPPPP/RNBQKBNR/PPPPPPPP/rnbqkbnr/pppppppp/RNBQKBNR",
            mode="placement",
        )
        manifest = generate_dataset_plan(base)
        assert len(manifest.images) == 160  # 4 x 8 x 5
        row_shifted = next(e for e in manifest.images if e.name == "img_C0_R1_r0")
        assert row_shifted.label_fen == (
            "1nbqkbnr/PPPPPPPP/RNBQKBNR/PPPPPPPP/rnbqkbnr/pppppppp/RNBQKBNR/pppppppp"
        )
        assert len(manifest.crop_sets["D"]) == 2048
        assert len(manifest.crop_sets["S"]) == 8192
        report = manifest.coverage("D")
        # the only uncovered (label, square) pairs trace back to the absent
        # rook: the lone empty cell it leaves behind
        assert all(label == "empty" for label, _sq in report["missing"]), report["missing"]
        piece_labels = {label for label, _sq in report["missing"]}
        assert piece_labels <= {"empty"}
        print(f"  coverage exceptions ({len(report['missing'])} pairs, all 'empty'):"
              f" {sorted(sq for _l, sq in report['missing'])[:8]}...")


def test_c03_key_square_splits():
    with criterion(3, "key-square training splits", 5):
        base = parse_fen(
            "pppppppp/1nbqkbnr/PPPPPPPP/RNBQKBNR/PPPPPPPP/rnbqkbnr/pppppppp/RNBQKBNR",
            mode="placement",
        )
        manifest = generate_dataset_plan(base)
        small = build_training_splits(manifest, "3x3", "d", seed=17)
        large = build_training_splits(manifest, "4x4", "d", seed=17)
        assert len(small["train"]["samples"]) == 108  # 9 squares x 12 pieces
        assert len(large["train"]["samples"]) == 192  # 16 x 12
        for splits in (small, large):
            train = {s["index"] for s in splits["train"]["samples"] if s["set"] == "D"}
            val = {s["index"] for s in splits["val"]["samples"]}
            test = {s["index"] for s in splits["test"]["samples"]}
            assert not (train & val) and not (train & test) and not (val & test)
            remainder = len(val) + len(test)
            assert abs(len(val) - 0.2 * remainder) <= 1
            assert abs(len(test) - 0.8 * remainder) <= 1


def test_c04_perft_oracle_agreement():
    with criterion(4, "perft agreement with the frozen enumerator", 10):
        start = standard_start()

        def perft(state, depth):
            moves = legal_moves(state)
            if depth == 1:
                return len(moves)
            return sum(perft(apply_move(state, m), depth - 1) for m in moves)

        for depth in (1, 2, 3):
            ours = perft(start, depth)
            oracle = oracle_perft(emit_fen(start), depth)
            assert ours == oracle, f"depth {depth}: {ours} != {oracle}"


def test_c05_grid_fit_recovery():
    with criterion(5, "board grid fit recovery", 30):
        rng = np.random.default_rng(20240605)
        geometry = BoardGeometry()
        for trial in range(200):
            rotvec = rng.uniform(-0.4, 0.4, 3)
            translation = np.array(
                [rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), rng.uniform(0.4, 1.0)]
            )
            truth = Pose(rotvec_to_matrix(rotvec), translation)
            exact = truth.transform(geometry.marker_anchors)

            clean = fit_board_grid(exact, geometry)
            assert clean.residual < 1e-9, trial

            noisy = exact + rng.normal(0.0, 0.001, exact.shape)
            frame = fit_board_grid(noisy, geometry)
            corners = frame.corners.reshape(9, 9, 3)
            along_file = np.linalg.norm(np.diff(corners, axis=1), axis=2)
            along_rank = np.linalg.norm(np.diff(corners, axis=0), axis=2)
            assert np.max(np.abs(along_file - geometry.square_size)) < 1e-9
            assert np.max(np.abs(along_rank - geometry.square_size)) < 1e-9
            best = registration_cost(frame.pose, geometry.marker_anchors, noisy)
            for rotational in (False, True):
                for axis in range(3):
                    for sign in (1.0, -1.0):
                        nudged = perturbed_pose(frame.pose, axis, sign * 1e-3, rotational)
                        cost = registration_cost(nudged, geometry.marker_anchors, noisy)
                        assert cost >= best, (trial, rotational, axis, sign)


def _simulate_turns(turns, rate, seed):
    rng = random.Random(seed)
    noise = NoiseModel(
        occupancy_flip_rate=rate,
        piece_confusion_rate=rate,
        retake_improvement_factor=0.8,
        viewpoint_improvement_factor=0.5,
        seed=seed,
    )
    windows = [CropWindow(sq, (0, 0, 10, 10), side_px=10.0) for sq in ALL_SQUARES]
    counter = {"n": 0}

    def capture(kind, ordinal):
        context = CaptureContext(attempt=kind, attempt_index=counter["n"])
        counter["n"] += 1
        return windows, context

    state = standard_start()
    outcomes = []
    extra_attempts = 0
    for _ in range(turns):
        moves = legal_moves(state)
        if not moves:
            state = standard_start()
            moves = legal_moves(state)
        move = rng.choice(sorted(moves, key=lambda m: m.uci))
        truth = apply_move(state, move).placement
        backend = make_noisy_oracle(lambda t=truth: t, noise)
        outcome = perceive_with_correction(state, capture, backend)
        outcomes.append(outcome.resolved)
        extra_attempts += len(outcome.attempts) - 1
        state = apply_move(state, move)
    return outcomes, extra_attempts


def test_c06_correction_loop():
    with criterion(6, "legality-driven correction loop", 60):
        rates = (0.0, 0.01, 0.02, 0.05)
        fractions = []
        for rate in rates:
            outcomes, extra = _simulate_turns(500, rate, seed=606)
            fractions.append(sum(outcomes) / len(outcomes))
            if rate == 0.0:
                assert fractions[0] == 1.0
                assert extra == 0  # never a retake without noise
        assert all(a >= b for a, b in zip(fractions, fractions[1:])), fractions
        again, _ = _simulate_turns(120, 0.02, seed=607)
        once, _ = _simulate_turns(120, 0.02, seed=607)
        assert again == once  # seed-deterministic
        print(f"  resolved fractions at {rates}: {[round(f, 3) for f in fractions]}")


def test_c07_trajectory_limits():
    with criterion(7, "trajectory limit enforcement", 10):
        config = load_config()
        geometry = config.board_geometry
        frame = fit_board_grid(geometry.marker_anchors.copy(), geometry)
        limits = config.limits
        rng = random.Random(707)
        state = standard_start()
        checked = 0
        while checked < 50:
            moves = legal_moves(state)
            if not moves:
                state = standard_start()
                continue
            move = rng.choice(sorted(moves, key=lambda m: m.uci))
            command = decode_move(encode_move(move, state))
            plan = plan_waypoints(command, frame, state.placement, limits)
            trajectory = time_parameterize(plan, limits)
            for t in np.arange(0.0, trajectory.total_duration + 1e-3, 1e-3):
                _, velocity, acceleration, _g = trajectory.sample(t)
                assert np.linalg.norm(velocity) <= limits.v_max + 1e-9
                assert np.linalg.norm(acceleration) <= limits.a_max + 1e-9
            assert np.allclose(trajectory.sample(0.0)[1], 0.0)
            assert np.allclose(trajectory.sample(trajectory.total_duration)[1], 0.0)
            if not command.jump and not command.castling and not command.capture:
                forced = decode_move(command.text[:4] + "1" + command.text[5:])
                jump_plan = plan_waypoints(forced, frame, state.placement, limits)
                jump_time = time_parameterize(jump_plan, limits).total_duration
                assert jump_time > trajectory.total_duration
            checked += 1
            state = apply_move(state, move)


def test_c08_prompt_golden():
    with criterion(8, "prompt golden fixture", 1):
        from pathlib import Path

        from chessarm.board import parse_san

        state = standard_start()
        for text in ("e4", "e5", "Nf3", "Nc6"):
            state = apply_move(state, parse_san(state, text))
        moves, cursor = [], state
        for text in ("Bc4", "Bc5", "d3", "Nf6", "O-O", "d6", "c3", "O-O", "h3", "h6"):
            move = parse_san(cursor, text)
            moves.append(move)
            cursor = apply_move(cursor, move)
        line = ScoredLine(
            rank=1, move=moves[0], score=EngineScore.cp(34), pv=tuple(moves), depth=20
        )
        bundle = build_prompt(
            Intent(IntentKind.PREDICT_NEXT, "can you explain?"),
            state,
            MoveAnalysis(state, line, QualityLabel.EXCELLENT),
        )
        assert tuple(k for k, _v in bundle.payload) == PAYLOAD_KEYS
        payload = dict(bundle.payload)
        assert payload["move"] == "Bc4"
        assert payload["evaluation"] == "Excellent"
        assert payload["history"] == "1. e4 e5 2. Nf3 Nc6"
        golden = (Path(__file__).parent / "fixtures" / "golden_user_message.txt").read_text()
        assert bundle.user_message() == golden  # byte-exact


def test_c09_gesture_and_quality_semantics():
    with criterion(9, "win-probability and gesture semantics", 5):
        assert score_to_winprob(EngineScore.cp(0)) == pytest.approx(0.5)
        rng = random.Random(909)
        for _ in range(1000):
            a, b = rng.randint(-3000, 3000), rng.randint(-3000, 3000)
            if a == b:
                continue
            lo, hi = sorted((a, b))
            assert score_to_winprob(EngineScore.cp(lo)) < score_to_winprob(EngineScore.cp(hi))
        policy = GesturePolicy()
        assert gesture_for_drop(0.0, policy) is GestureKind.NOD
        assert gesture_for_drop(policy.nod_threshold, policy) is GestureKind.NOD
        assert gesture_for_drop(policy.shake_threshold, policy) is GestureKind.SHAKE
        assert gesture_for_drop(1.0, policy) is GestureKind.SHAKE


def test_c10_grasp_categorization():
    with criterion(10, "grasp trial categorization and offsets", 30):
        ok, miss = GraspOutcome.ACCURATE_GRAB, GraspOutcome.MISS
        assert categorize_grasp_trials([ok] * 10) == "accurate"
        assert categorize_grasp_trials([ok] * 9 + [miss]) == "remedied"
        assert categorize_grasp_trials([ok] * 8 + [miss] * 2) == "remedied"
        assert categorize_grasp_trials([ok] * 7 + [miss] * 3) == "missed"
        assert categorize_grasp_trials([miss] * 10) == "missed"
        model = GraspModel()
        offsets = [(0.0, 0.0), (0.00625, 0.0), (0.02, 0.0)]  # center, halfway, edge
        rates = [correct_grasp_rate(off, model, trials=1000, seed=1010) for off in offsets]
        assert rates[0] >= rates[1] >= rates[2], rates
        print(f"  correct-grasp rates center/halfway/edge: {[round(r, 3) for r in rates]}")


def test_c11_end_to_end_replay():
    with criterion(11, "end-to-end scripted game", 30):
        config = with_seed(load_config(), 1111)
        pipeline = GamePipeline(
            config,
            opponent=ScriptedOpponent(["e7e5", "b8c6", "g8f6"]),
            forced_robot_moves=["e2e4", "f1c4", "d1h5", "h5f7"],
        )
        log = pipeline.run()
        assert log.result == "1-0"
        states = [e.payload["state"] for e in log.events if e.kind == "state_change"]
        assert states[0] == "Init" and "Ready" in states and states[-1] == "GameOver"

        fen = emit_fen(standard_start())
        for uci in ("e2e4", "e7e5", "f1c4", "b8c6", "d1h5", "g8f6", "h5f7"):
            fen = oracle_apply(fen, uci)
        assert log.final_fen == fen
        game = import_pgn(log.pgn)
        assert emit_fen(game.states()[-1]) == log.final_fen

        assert validate_event_log(log.events) == []
        executed = [
            e.payload["move_number"] for e in log.events if e.kind == "trajectory_done"
        ]
        for move_number in executed:
            for phase in ("detection", "evaluation", "search", "execution"):
                count = sum(
                    1
                    for r in log.timings
                    if r.phase == phase and r.move_number == move_number
                )
                assert count == 1, (phase, move_number)
