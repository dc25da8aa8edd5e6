"""The retake/viewpoint correction loop over simulated turns."""

import random

from chessarm.board import (
    ALL_SQUARES,
    Square,
    apply_move,
    legal_moves,
    resolve_uci,
    standard_start,
)
from chessarm.perception import (
    CaptureContext,
    CropWindow,
    Halted,
    NoiseModel,
    Resolved,
    RetakePolicy,
    ScriptedBackend,
    make_noisy_oracle,
    perceive_with_correction,
)


def plain_capture(kind, ordinal):
    windows = [
        CropWindow(sq, (sq.file * 10, sq.rank * 10, 10, 30), side_px=10.0)
        for sq in ALL_SQUARES
    ]
    return windows, CaptureContext(attempt=kind, attempt_index=ordinal)


def make_counting_capture():
    """Capture closure with a global attempt counter for cross-turn noise."""
    counter = {"n": 0}

    def capture(kind, ordinal):
        windows, _ = plain_capture(kind, ordinal)
        context = CaptureContext(attempt=kind, attempt_index=counter["n"])
        counter["n"] += 1
        return windows, context

    return capture


class TestResolution:
    def test_zero_noise_resolves_initially(self):
        prev = standard_start()
        truth = apply_move(prev, resolve_uci(prev, "e2e4")).placement
        backend = make_noisy_oracle(lambda: truth, NoiseModel(seed=1))
        outcome = perceive_with_correction(prev, plain_capture, backend)
        assert isinstance(outcome.result, Resolved)
        assert outcome.result.move.uci == "e2e4"
        assert [a.kind for a in outcome.attempts] == ["initial"]

    def test_no_move_detected(self):
        prev = standard_start()
        backend = make_noisy_oracle(lambda: prev.placement, NoiseModel(seed=2))
        outcome = perceive_with_correction(prev, plain_capture, backend)
        assert isinstance(outcome.result, Resolved)
        assert outcome.result.move is None

    def test_retake_recovers_from_dropped_king(self):
        prev = standard_start()
        truth = apply_move(prev, resolve_uci(prev, "e2e4")).placement
        broken = truth.with_cells({Square.from_name("e1").index: None})
        backend = ScriptedBackend([broken, truth])
        outcome = perceive_with_correction(prev, plain_capture, backend)
        assert isinstance(outcome.result, Resolved)
        assert [a.kind for a in outcome.attempts] == ["initial", "retake"]
        assert outcome.attempts[0].failure == "implausible-position"
        assert "missing-king" in outcome.attempts[0].report.violations

    def test_persistent_teleport_halts(self):
        prev = standard_start()
        from chessarm.board import Piece

        teleported = prev.placement.with_cells(
            {
                Square.from_name("e2").index: None,
                Square.from_name("e5").index: Piece.from_letter("P"),
            }
        )
        backend = ScriptedBackend([teleported])
        outcome = perceive_with_correction(prev, plain_capture, backend)
        assert isinstance(outcome.result, Halted)
        assert outcome.result.reason == "no-legal-move-matches"
        assert [a.kind for a in outcome.attempts] == ["initial", "retake", "retake", "viewpoint"]

    def test_budget_respects_policy(self):
        prev = standard_start()
        broken = prev.placement.with_cells({Square.from_name("e1").index: None})
        backend = ScriptedBackend([broken])
        policy = RetakePolicy(max_retakes=0, viewpoint_enabled=False)
        outcome = perceive_with_correction(prev, plain_capture, backend, policy)
        assert isinstance(outcome.result, Halted)
        assert outcome.result.reason == "implausible-position"
        assert [a.kind for a in outcome.attempts] == ["initial"]


def simulate_turns(turns, flip_rate, seed):
    """Random legal turns perceived through the noisy oracle; returns the
    resolved fraction and the number of retake/viewpoint attempts used."""
    rng = random.Random(seed)
    noise = NoiseModel(
        occupancy_flip_rate=flip_rate,
        piece_confusion_rate=flip_rate,
        retake_improvement_factor=0.8,
        viewpoint_improvement_factor=0.5,
        seed=seed,
    )
    capture = make_counting_capture()
    state = standard_start()
    resolved = 0
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
        resolved += outcome.resolved
        extra_attempts += len(outcome.attempts) - 1
        state = apply_move(state, move)
    return resolved / turns, extra_attempts


class TestNoiseSweep:
    def test_zero_noise_never_retakes(self):
        fraction, extra = simulate_turns(60, 0.0, seed=11)
        assert fraction == 1.0
        assert extra == 0

    def test_resolution_monotone_in_noise(self):
        fractions = [simulate_turns(120, rate, seed=12)[0] for rate in (0.0, 0.01, 0.02, 0.05)]
        assert fractions[0] == 1.0
        assert all(a >= b for a, b in zip(fractions, fractions[1:]))

    def test_seed_determinism(self):
        assert simulate_turns(40, 0.03, seed=13) == simulate_turns(40, 0.03, seed=13)
