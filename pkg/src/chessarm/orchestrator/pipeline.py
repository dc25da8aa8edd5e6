"""The gameplay state machine: perceive, evaluate, gesture, plan, execute.

One thread owns the pipeline; outside parties (console clients, tests)
interact only through the thread-safe command queue.  All time comes from
the virtual clock, so identical seeds give identical logs, timestamps
included.
"""

from __future__ import annotations

import queue
from dataclasses import dataclass, field
from typing import Callable, List, Optional

from ..board.core import Color, GameState, Move, emit_fen, parse_fen, standard_start
from ..board.moves import IllegalMove, game_result, legal_moves, resolve_uci
from ..board.notation import export_pgn, history_sans, san
from ..engine.scoring import EngineScore, QualityLabel, quality_label, score_to_winprob
from ..engine.uci import EngineSession, ScoredLine, open_session
from ..interaction.gestures import GestureKind, gesture_for_drop
from ..interaction.intents import IntentKind, match_intent
from ..interaction.llm import LLMBackend, MockLLMBackend
from ..interaction.prompts import MoveAnalysis, build_prompt
from ..interaction.streamqueue import SentenceQueue
from ..motion.commands import decode_move, encode_move
from ..motion.trajectory import time_parameterize
from ..motion.waypoints import plan_waypoints
from ..perception.backends import ClassifierBackend, NoisyOracleBackend
from ..perception.correction import Halted, perceive_with_correction
from .clock import VirtualClock
from .config import PipelineConfig
from .events import EventRecorder, PoseState, SessionLog
from .opponents import resolve_move_text
from .rig import CaptureRig, SimulatedTable, synthetic_calibration

DEFAULT_ASSISTANT_RESPONSE = [
    "Sure, I can assist with that. ",
    "The line follows the engine's preferred continuation, ",
    "keeping development flowing and the king safe.",
]


class InvalidCommand(ValueError):
    pass


@dataclass
class Command:
    kind: str
    payload: dict = field(default_factory=dict)
    reply: Optional[Callable[[dict], None]] = None

    def respond(self, message: dict) -> None:
        if self.reply is not None:
            self.reply(message)


class GamePipeline:
    """Drives one game (or one halted-and-corrected game) to its end."""

    def __init__(
        self,
        config: PipelineConfig,
        opponent=None,
        llm: Optional[LLMBackend] = None,
        backend: Optional[ClassifierBackend] = None,
        engine_session: Optional[EngineSession] = None,
        forced_robot_moves: Optional[List[str]] = None,
        start_fen: Optional[str] = None,
        move_limit: Optional[int] = None,
        throttle: float = 0.0,
    ):
        self.config = config
        self.opponent = opponent
        self.llm = llm or MockLLMBackend([DEFAULT_ASSISTANT_RESPONSE])
        self.clock = VirtualClock(throttle)
        self.recorder = EventRecorder(self.clock)
        self.commands: "queue.Queue[Command]" = queue.Queue()
        self.game: GameState = parse_fen(start_fen) if start_fen else standard_start()
        self.table = SimulatedTable(self.game.placement)
        self.pose = PoseState.INIT
        self.engine = engine_session
        self._owns_engine = engine_session is None
        self._external_backend = backend
        self.backend: Optional[ClassifierBackend] = backend
        self.rig: Optional[CaptureRig] = None
        self.frame = None
        self.forced_robot_moves = list(forced_robot_moves or [])
        self.move_limit = move_limit
        self.result: Optional[str] = None
        self.last_gesture: Optional[str] = None
        self.cycle = 0
        self._confirmed = False

    # --- public surface -----------------------------------------------------

    def post(self, kind: str, payload: Optional[dict] = None, reply=None) -> None:
        """Queue a command from any thread."""
        self.commands.put(Command(kind, payload or {}, reply))

    def snapshot(self) -> dict:
        return {
            "fen": emit_fen(self.game),
            "pose_state": self.pose.value,
            "last_gesture": self.last_gesture,
            "move_history": history_sans(self.game),
        }

    def run(self) -> SessionLog:
        try:
            self._startup()
            while self.result is None:
                if self._game_over_check():
                    break
                if self.game.side_to_move is self.config.robot_color or self._confirmed:
                    self._confirmed = False
                    self._cycle()
                else:
                    self._await_human()
        finally:
            if self._owns_engine and self.engine is not None:
                self.engine.close()
        log = self.recorder.log
        log.result = self.result
        log.final_fen = emit_fen(self.game)
        log.pgn = export_pgn(self.game, result=self.result or "*")
        if self.config.log_dir:
            log.save(self.config.log_dir)
        return log

    # --- phases ---------------------------------------------------------------

    def _transition(self, state: PoseState) -> None:
        self.pose = state
        self.recorder.emit("state_change", state=state.value, fen=emit_fen(self.game))

    def _startup(self) -> None:
        self._transition(PoseState.INIT)
        if self.engine is None:
            self.engine = open_session(self.config.engine)
        self._transition(PoseState.HOVERING)
        self.clock.advance(self.config.timings.capture_s)
        self.frame = synthetic_calibration(
            self.config.camera,
            self.config.board_geometry,
            self.config.board_pose,
            self.config.capture_geometry,
        )
        self.rig = CaptureRig(
            self.config.camera, self.frame, self.config.capture_geometry, self.config.board_geometry
        )
        if self.backend is None:
            self.backend = NoisyOracleBackend(self.table.placement, self.config.noise)
        self._transition(PoseState.READY)

    def _game_over_check(self) -> bool:
        result = game_result(self.game)
        if result is None:
            return False
        self._finish(result)
        return True

    def _finish(self, result: str) -> None:
        if self.result is not None:
            return
        self.result = result
        self.recorder.emit("game_end", result=result, final_fen=emit_fen(self.game))
        self._transition(PoseState.GAME_OVER)

    def _costed_capture(self, kind: str, ordinal: int):
        self.clock.advance(self.config.timings.capture_s + self.config.timings.classify_s)
        return self.rig(kind, ordinal)

    def _cycle(self) -> None:
        """One robot move: detect, evaluate, gesture, search, execute."""
        self.cycle += 1
        detect_start = self.clock.now()
        self._transition(PoseState.CAPTURING)
        self._transition(PoseState.PERCEIVING)
        outcome = perceive_with_correction(
            self.game, self._costed_capture, self.backend, self.config.retakes
        )
        self.recorder.emit(
            "perception",
            resolved=outcome.resolved,
            attempts=[
                {"kind": a.kind, "ok": a.failure is None, "failure": a.failure}
                for a in outcome.attempts
            ],
        )
        self.recorder.record_timing("detection", self.clock.now() - detect_start, self.cycle)

        if isinstance(outcome.result, Halted):
            human_move = self._halt_and_await_correction(outcome.result)
            if self.result is not None:
                return
        else:
            human_move = outcome.result.move
            self._transition(PoseState.ANALYSING)

        prev_state = self.game
        if human_move is not None:
            self.recorder.emit(
                "move_inferred", uci=human_move.uci, san=san(self.game, human_move)
            )
            self.game = self._apply(self.game, human_move)

        gesture, drop, label = self._evaluation_phase(prev_state, human_move)

        if self._maybe_gesture(gesture, drop, label, human_move):
            return  # game ended right after the gesture
        if self.game.side_to_move is not self.config.robot_color:
            # confirmed turn with no physical change: back to waiting
            self._transition(PoseState.READY)
            return

        robot_move = self._search_phase()
        self._execution_phase(robot_move)
        if not self._game_over_check():
            if self.move_limit is not None and self.cycle >= self.move_limit:
                self._finish("*")
            else:
                self._transition(PoseState.READY)

    def _apply(self, state: GameState, move: Move) -> GameState:
        from ..board.moves import apply_move

        return apply_move(state, move)

    # --- evaluation / gesture -------------------------------------------------

    def _engine_lines(self, state: GameState, multipv: int, depth: int) -> List[ScoredLine]:
        lines = self.engine.analyse(emit_fen(state), depth=depth, multipv=multipv)
        self.clock.advance(self.config.timings.engine_eval_s)
        return lines

    def _winprob(self, score: EngineScore) -> float:
        return score_to_winprob(score, self.config.winprob)

    def _terminal_winprob(self, state: GameState, mover: Color) -> float:
        """Mover's win probability when the game ended with their move."""
        result = game_result(state)
        if result == "1/2-1/2":
            return 0.5
        winner = Color.WHITE if result == "1-0" else Color.BLACK
        clamp = self.config.winprob.mate_clamp
        return clamp if winner is mover else 1.0 - clamp

    def _evaluation_phase(self, prev_state: GameState, human_move: Optional[Move]):
        start = self.clock.now()
        gesture = None
        drop = 0.0
        label = None
        mover = prev_state.side_to_move
        if human_move is None:
            # nothing played: a single baseline evaluation of the position
            if legal_moves(self.game):
                lines = self._engine_lines(self.game, 1, self.config.eval_depth)
                self.recorder.emit(
                    "engine_result",
                    purpose="evaluation",
                    lines=_lines_payload(lines),
                )
        else:
            best = self._engine_lines(prev_state, 1, self.config.eval_depth)[0]
            p_best = self._winprob(best.score)
            if game_result(self.game) is not None:
                p_played = self._terminal_winprob(self.game, mover)
            else:
                reply = self._engine_lines(self.game, 1, self.config.eval_depth)[0]
                p_played = 1.0 - self._winprob(reply.score)
            drop = max(0.0, p_best - p_played)
            label = quality_label(drop, self.config.quality)
            gesture = gesture_for_drop(drop, self.config.gestures)
            self.recorder.emit(
                "engine_result",
                purpose="evaluation",
                best=best.move.uci,
                drop=round(drop, 6),
                quality=label.value,
            )
            self._last_quality = label
        self.recorder.record_timing("evaluation", self.clock.now() - start, self.cycle)
        return gesture, drop, label

    def _maybe_gesture(self, gesture, drop, label, human_move) -> bool:
        """Emit the gesture state/event; returns True when the game also
        ended here (mate/draw delivered by the human's move)."""
        show = (
            self.config.gestures_enabled
            and human_move is not None
            and gesture is not None
            and gesture is not GestureKind.NONE
        )
        if show:
            self._transition(PoseState.GESTURING)
            self.clock.advance(self.config.timings.gesture_s)
            self.last_gesture = gesture.value
            self.recorder.emit(
                "gesture", kind=gesture.value, drop=round(drop, 6), quality=label.value
            )
        if game_result(self.game) is not None:
            self._game_over_check()
            return True
        return False

    # --- search / execution ----------------------------------------------------

    def _search_phase(self) -> Move:
        start = self.clock.now()
        lines = self.engine.analyse(
            emit_fen(self.game),
            depth=self.config.engine.depth,
            multipv=self.config.engine.multipv,
        )
        self.clock.advance(self.config.timings.engine_search_s)
        self.recorder.emit(
            "engine_result", purpose="search", lines=_lines_payload(lines)
        )
        self.recorder.record_timing("search", self.clock.now() - start, self.cycle)
        if self.forced_robot_moves:
            text = self.forced_robot_moves.pop(0)
            return resolve_move_text(self.game, text)
        return lines[0].move

    def _execution_phase(self, move: Move) -> None:
        self._transition(PoseState.EXECUTING)
        start = self.clock.now()
        command = encode_move(move, self.game)
        plan = plan_waypoints(
            decode_move(command), self.frame, self.table.placement(), self.config.limits
        )
        trajectory = time_parameterize(plan, self.config.limits)
        self.recorder.emit(
            "trajectory_started",
            command=command,
            move_number=self.cycle,
            waypoints=len(plan),
        )
        if self.config.log_dir:
            start_t = self.clock.now()
            for t, x, y, z, gripper in trajectory.csv_rows(dt=0.05):
                self.recorder.log.trajectory_rows.append(
                    (command, round(start_t + t, 6), x, y, z, gripper)
                )
        self.table.play(self.game, move)
        self.clock.advance(trajectory.total_duration)
        self.recorder.emit(
            "trajectory_done",
            command=command,
            move_number=self.cycle,
            duration=round(trajectory.total_duration, 6),
            category=_move_category(command),
        )
        self.game = self._apply(self.game, move)
        self.recorder.record_timing("execution", self.clock.now() - start, self.cycle)

    # --- human interaction -------------------------------------------------------

    def _await_human(self) -> None:
        if self.opponent is not None:
            move = self.opponent.next_move(self.game)
            if move is None:
                self._finish("*")
                return
            self.table.play(self.game, move)
            self.recorder.emit("human_confirm", source="scripted", uci=move.uci)
            self._confirmed = True
            return
        while self.result is None:
            command = self.commands.get()
            if self._handle_command(command, awaiting="turn"):
                return

    def _halt_and_await_correction(self, halted: Halted) -> Optional[Move]:
        self._transition(PoseState.HALTED)
        self.recorder.emit(
            "halt", reason=halted.reason, observed_fen=emit_fen(halted.observed)
        )
        while self.result is None:
            command = self.commands.get()
            if command.kind == "correct_position":
                move = self._apply_correction(command)
                if move is not _REJECTED:
                    self._transition(PoseState.ANALYSING)
                    return move
            elif not self._handle_command(command, awaiting="correction"):
                continue
        return None

    def _apply_correction(self, command: Command):
        """Adopt an operator-supplied FEN; reconcile with the game if the
        difference is one legal move, otherwise replace the state."""
        from ..board.core import MalformedFen, plausibility_check
        from ..board.moves import NO_MATCH, NO_MOVE, AmbiguousMove, infer_move

        fen = command.payload.get("fen", "")
        try:
            corrected = parse_fen(fen)
        except MalformedFen as exc:
            command.respond({"type": "error", "message": f"bad FEN: {exc}"})
            return _REJECTED
        report = plausibility_check(corrected.placement, "gameplay")
        if not report.ok:
            command.respond(
                {"type": "error", "message": f"implausible position: {report.violations}"}
            )
            return _REJECTED
        self.recorder.emit("correction", fen=fen)
        command.respond({"type": "ok"})
        self.table.set_placement(corrected.placement)
        try:
            inferred = infer_move(self.game, corrected.placement)
        except AmbiguousMove:
            inferred = NO_MATCH
        if inferred is NO_MOVE:
            return None
        if inferred is NO_MATCH or corrected.side_to_move is not self.game.side_to_move.other:
            # unexplainable difference: adopt the corrected state wholesale
            self.game = corrected
            return None
        return inferred

    def _handle_command(self, command: Command, awaiting: str) -> bool:
        """Process one queued command; returns True when the wait is over."""
        try:
            if command.kind == "abort":
                command.respond({"type": "ok"})
                self._finish("*")
                return True
            if command.kind == "confirm_turn":
                if awaiting != "turn":
                    raise InvalidCommand("cannot confirm a turn right now")
                command.respond({"type": "ok"})
                self.recorder.emit("human_confirm", source="console")
                self._confirmed = True
                return True
            if command.kind == "submit_move":
                if awaiting != "turn":
                    raise InvalidCommand("not awaiting a move")
                text = command.payload.get("uci", "")
                try:
                    move = resolve_uci(self.game, text)
                except IllegalMove as exc:
                    raise InvalidCommand(str(exc)) from None
                self.table.play(self.game, move)
                command.respond({"type": "ok"})
                return False
            if command.kind == "ask":
                self._answer_question(command)
                return False
            if command.kind == "correct_position":
                raise InvalidCommand("no halted position to correct")
            raise InvalidCommand(f"unknown command {command.kind!r}")
        except InvalidCommand as exc:
            command.respond({"type": "error", "message": str(exc)})
            return False

    # --- verbal interaction ---------------------------------------------------------

    def _answer_question(self, command: Command) -> None:
        question = command.payload.get("question", "")
        intent = match_intent(question)
        command.respond({"type": "ok"})
        if intent.kind is IntentKind.NONE:
            self._speak("I can explain the last move or predict the next one.")
            return
        try:
            analysis, state = self._analysis_for_intent(intent)
        except _NoAnswer as exc:
            self._speak(str(exc))
            return
        bundle = build_prompt(intent, state, analysis)
        queue_ = SentenceQueue()
        for chunk in self.llm.stream(bundle):
            for sentence in queue_.push(chunk):
                self._speak(sentence)
        if queue_.pending:
            self._speak(queue_.pending)

    def _speak(self, text: str) -> None:
        self.recorder.emit("sentence", text=text.strip())

    def _analysis_for_intent(self, intent):
        if intent.kind is IntentKind.PREDICT_NEXT:
            if not legal_moves(self.game):
                raise _NoAnswer("The game is over; there is no next move.")
            lines = self._engine_lines(self.game, self.config.engine.multipv, self.config.eval_depth)
            return MoveAnalysis(self.game, lines[0], QualityLabel.EXCELLENT), self.game
        if not self.game.history:
            raise _NoAnswer("No move has been played yet.")
        reference = parse_fen(self.game.initial_fen)
        for move in self.game.history[:-1]:
            reference = self._apply(reference, move)
        last = self.game.history[-1]
        if legal_moves(self.game):
            continuation = self._engine_lines(self.game, 1, self.config.eval_depth)[0]
            score = _negate(continuation.score)
            pv = (last,) + continuation.pv
        else:
            score = EngineScore.mate(1) if game_result(self.game) != "1/2-1/2" else EngineScore.cp(0)
            pv = (last,)
        line = ScoredLine(rank=1, move=last, score=score, pv=pv, depth=self.config.eval_depth)
        label = getattr(self, "_last_quality", None) or QualityLabel.EXCELLENT
        return MoveAnalysis(reference, line, label), self.game


class _NoAnswer(Exception):
    pass


_REJECTED = object()


def _negate(score: EngineScore) -> EngineScore:
    if score.kind == "mate":
        return EngineScore.mate(-score.value)
    return EngineScore.cp(-score.value)


def _lines_payload(lines: List[ScoredLine]) -> List[dict]:
    return [
        {
            "rank": line.rank,
            "move": line.move.uci,
            "score_kind": line.score.kind,
            "score_value": line.score.value,
            "depth": line.depth,
        }
        for line in lines
    ]


def _move_category(command: str) -> str:
    if command[6] == "1":
        return "castle"
    if command[5] == "1":
        return "capture"
    if command[4] == "1":
        return "jump"
    return "slide"


def run_gameplay(
    config: PipelineConfig,
    opponent=None,
    **kwargs,
) -> SessionLog:
    """Run one game to completion and return its session log."""
    pipeline = GamePipeline(config, opponent=opponent, **kwargs)
    return pipeline.run()
