"""Command-line entry points for the simulated chess-robot stack."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .board.core import parse_fen
from .board.notation import import_pgn
from .motion.grasp import GraspModel, categorize_grasp_trials, simulate_grasp_trial
from .orchestrator.collect import run_data_collection
from .orchestrator.config import load_config, with_seed
from .orchestrator.console import ConsoleServer, PortInUse
from .orchestrator.opponents import ScriptedOpponent
from .orchestrator.pipeline import GamePipeline
from .orchestrator.timing import format_report, timing_report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chessarm",
        description="simulated chess robot: play, replay, collect data, calibrate",
    )
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--log", help="directory for session logs")
    sub = parser.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="interactive game in the terminal")
    play.add_argument("--moves", help="comma-separated scripted human replies (for demos)")

    replay = sub.add_parser("replay", help="re-enact a recorded game")
    replay.add_argument("--pgn", required=True, help="PGN file to replay")

    collect = sub.add_parser("collect", help="generate the dataset plan and move plans")
    collect.add_argument("--base", help="file holding the base placement FEN")
    collect.add_argument("--out", default="collection_out", help="output directory")

    calibrate = sub.add_parser("calibrate", help="fit the board frame")
    group = calibrate.add_mutually_exclusive_group(required=True)
    group.add_argument("--synthetic", action="store_true", help="simulate the markers")
    group.add_argument("--markers", help="JSON file of marker corner observations")

    sim = sub.add_parser("simulate-perception", help="run the correction-loop simulation")
    sim.add_argument("--noise", type=float, default=0.02, help="error rate")
    sim.add_argument("--turns", type=int, default=100)

    grasp = sub.add_parser("grasp-sim", help="simulate grasp trials")
    grasp.add_argument("--piece", choices=("pawn", "king"), default="pawn")
    grasp.add_argument("--offsets", default="0,0.00625,0.02", help="comma-separated meters")

    serve = sub.add_parser("serve", help="run the console service")
    serve.add_argument("--port", type=int)
    serve.add_argument(
        "--frontend",
        default="frontend",
        help="directory with the built browser client (public/ + dist/)",
    )
    return parser


def _config_from_args(args) -> "PipelineConfig":
    config = load_config(args.config)
    if args.seed is not None:
        config = with_seed(config, args.seed)
    if args.log:
        config.log_dir = args.log
    return config


def cmd_play(args) -> int:
    config = _config_from_args(args)
    opponent = None
    if args.moves:
        opponent = ScriptedOpponent([m.strip() for m in args.moves.split(",") if m.strip()])
        pipeline = GamePipeline(config, opponent=opponent)
        log = pipeline.run()
    else:
        log = _terminal_play(config)
    print(f"result: {log.result}")
    print(f"final:  {log.final_fen}")
    print(format_report(timing_report(log)))
    return 0


def _terminal_play(config):
    """A minimal stdin-driven session: type a move, or 'ask <question>',
    'correct <fen>' while halted, 'quit' to abort."""
    import threading

    pipeline = GamePipeline(config)
    pipeline.recorder.subscribe(_print_event)
    thread = threading.Thread(target=pipeline.run, daemon=True)
    thread.start()
    try:
        while thread.is_alive():
            try:
                line = input("you> ").strip()
            except EOFError:
                pipeline.post("abort")
                break
            if not line:
                continue
            if line in ("quit", "exit"):
                pipeline.post("abort")
                break
            if line.startswith("ask "):
                pipeline.post("ask", {"question": line[4:]})
            elif line.startswith("correct "):
                pipeline.post("correct_position", {"fen": line[len("correct ") :]})
            else:
                pipeline.post("submit_move", {"uci": line}, reply=_print_reply)
                pipeline.post("confirm_turn")
    finally:
        thread.join(timeout=30)
    return pipeline.recorder.log


def _print_event(event) -> None:
    if event.kind == "state_change":
        print(f"[{event.t:8.2f}s] state={event.payload['state']} fen={event.payload['fen']}")
    elif event.kind in ("gesture", "sentence", "halt", "game_end", "move_inferred"):
        print(f"[{event.t:8.2f}s] {event.kind}: {event.payload}")


def _print_reply(message) -> None:
    if message.get("type") == "error":
        print(f"!! {message['message']}")


def cmd_replay(args) -> int:
    config = _config_from_args(args)
    game = import_pgn(Path(args.pgn).read_text())
    states = game.states()
    white_moves, black_moves = [], []
    for state, move in zip(states, [m for m in _moves_of(game)]):
        (white_moves if state.side_to_move.value == "w" else black_moves).append(move)
    robot_is_white = config.robot_color.value == "w"
    pipeline = GamePipeline(
        config,
        opponent=ScriptedOpponent(black_moves if robot_is_white else white_moves),
        forced_robot_moves=white_moves if robot_is_white else black_moves,
        start_fen=game.initial_fen,
        move_limit=len(white_moves if robot_is_white else black_moves),
    )
    log = pipeline.run()
    print(f"replayed {len(states) - 1} plies; result: {log.result}")
    print(format_report(timing_report(log)))
    return 0


def _moves_of(game):
    out = []
    cursor = parse_fen(game.initial_fen)
    from .board.notation import parse_san

    for text in game.sans:
        move = parse_san(cursor, text)
        out.append(move.uci)
        from .board.moves import apply_move

        cursor = apply_move(cursor, move)
    return out


def cmd_collect(args) -> int:
    config = _config_from_args(args)
    if args.base:
        config.collect_base_fen = Path(args.base).read_text().strip()
    run = run_data_collection(config, output_dir=args.out)
    manifest = run.manifest
    print(f"images: {len(manifest.images)}")
    for name, specs in sorted(manifest.crop_sets.items()):
        print(f"crop set {name}: {len(specs)} sub-images")
    report = manifest.coverage("D")
    print(f"coverage: {report['covered']} pairs, {len(report['missing'])} missing")
    print(f"transitions planned: {len(run.transitions)}")
    print(f"written to {run.manifest_path}")
    return 0


def cmd_calibrate(args) -> int:
    config = _config_from_args(args)
    if args.synthetic:
        from .orchestrator.rig import synthetic_calibration

        frame = synthetic_calibration(
            config.camera, config.board_geometry, config.board_pose, config.capture_geometry
        )
    else:
        from .geometry.fit import fit_board_grid
        from .geometry.markers import MarkerObservation, estimate_marker_pose

        data = json.loads(Path(args.markers).read_text())
        centers = []
        for entry in data["markers"]:
            obs = MarkerObservation(
                entry["marker_id"], entry["corners_px"], entry["marker_length"]
            )
            centers.append(estimate_marker_pose(obs, config.camera).translation)
        import numpy as np

        frame = fit_board_grid(np.array(centers), config.board_geometry)
    print(f"residual: {frame.residual:.2e} m")
    print("pose translation:", [round(v, 5) for v in frame.pose.translation])
    a1 = frame.centers[0]
    h8 = frame.centers[63]
    print("a1 center:", [round(v, 4) for v in a1], " h8 center:", [round(v, 4) for v in h8])
    return 0


def cmd_simulate_perception(args) -> int:
    import random

    from .board.moves import apply_move, legal_moves
    from .board.core import standard_start
    from .perception import (
        CaptureContext,
        CropWindow,
        NoiseModel,
        make_noisy_oracle,
        perceive_with_correction,
    )
    from .board.core import ALL_SQUARES

    config = _config_from_args(args)
    noise = NoiseModel(
        occupancy_flip_rate=args.noise,
        piece_confusion_rate=args.noise,
        retake_improvement_factor=0.8,
        viewpoint_improvement_factor=0.5,
        seed=config.seed,
    )
    windows = [CropWindow(sq, (0, 0, 10, 10), side_px=10.0) for sq in ALL_SQUARES]
    counter = {"n": 0}

    def capture(kind, ordinal):
        context = CaptureContext(attempt=kind, attempt_index=counter["n"])
        counter["n"] += 1
        return windows, context

    rng = random.Random(config.seed)
    state = standard_start()
    resolved = halted = retakes = 0
    for _ in range(args.turns):
        moves = legal_moves(state)
        if not moves:
            state = standard_start()
            moves = legal_moves(state)
        move = rng.choice(sorted(moves, key=lambda m: m.uci))
        truth = apply_move(state, move).placement
        backend = make_noisy_oracle(lambda t=truth: t, noise)
        outcome = perceive_with_correction(state, capture, backend, config.retakes)
        resolved += outcome.resolved
        halted += not outcome.resolved
        retakes += len(outcome.attempts) - 1
        state = apply_move(state, move)
    print(f"turns: {args.turns}  noise: {args.noise}")
    print(f"resolved: {resolved} ({100 * resolved / args.turns:.1f}%)  halted: {halted}")
    print(f"extra attempts (retakes/viewpoints): {retakes}")
    return 0


def cmd_grasp_sim(args) -> int:
    config = _config_from_args(args)
    model = GraspModel()
    offsets = [float(x) for x in args.offsets.split(",")]
    print(f"piece: {args.piece}   (trial blocks of 10, seeds from config)")
    for offset in offsets:
        outcomes = [
            simulate_grasp_trial((offset, 0.0), model, seed=config.seed * 7919 + i)
            for i in range(10)
        ]
        category = categorize_grasp_trials(outcomes)
        correct = sum(1 for o in outcomes if o.value != "miss")
        print(f"offset {offset * 100:5.3f} cm: {correct}/10 correct -> {category}")
    return 0


def cmd_serve(args) -> int:
    config = _config_from_args(args)
    if args.port is not None:
        config.console_port = args.port
    pipeline = GamePipeline(config, throttle=1.0)
    static_dir = Path(args.frontend) if Path(args.frontend, "public").is_dir() else None
    server = ConsoleServer(pipeline, static_dir=static_dir)
    if static_dir:
        print(f"browser client on http://{config.console_host}:{config.console_port}/")
    print(f"console on ws://{config.console_host}:{config.console_port}/ws")
    try:
        server.serve(config.console_host, config.console_port)
    except PortInUse as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


_COMMANDS = {
    "play": cmd_play,
    "replay": cmd_replay,
    "collect": cmd_collect,
    "calibrate": cmd_calibrate,
    "simulate-perception": cmd_simulate_perception,
    "grasp-sim": cmd_grasp_sim,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
