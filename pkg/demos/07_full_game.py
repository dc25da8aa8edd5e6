"""
A full simulated game
=====================

The pipeline plays white against a scripted opponent: every turn runs the
camera capture, the legality-checked perception, engine evaluation with a
nod/shake verdict, and a limit-respecting trajectory on the virtual clock.
"""

from chessarm.orchestrator import (
    GamePipeline,
    ScriptedOpponent,
    format_report,
    load_config,
    timing_report,
    validate_event_log,
    with_seed,
)

config = with_seed(load_config(), 2024)
pipeline = GamePipeline(
    config,
    opponent=ScriptedOpponent(["e7e5", "b8c6", "g8f6"]),
    forced_robot_moves=["e2e4", "f1c4", "d1h5", "h5f7"],
)
log = pipeline.run()

############################################################
# What happened, move by move.

for event in log.events:
    if event.kind == "move_inferred":
        print(f"[{event.t:6.1f}s] opponent played {event.payload['san']}")
    elif event.kind == "gesture":
        print(
            f"[{event.t:6.1f}s] robot {event.payload['kind']}s "
            f"(drop {event.payload['drop']:.3f}, {event.payload['quality']})"
        )
    elif event.kind == "trajectory_done":
        print(
            f"[{event.t:6.1f}s] executed {event.payload['command']} "
            f"({event.payload['category']}, {event.payload['duration']:.1f}s)"
        )
    elif event.kind == "game_end":
        print(f"[{event.t:6.1f}s] game over: {event.payload['result']}")

############################################################
# The log is audited structurally, and the timings summarize per phase.

problems = validate_event_log(log.events)
print("\nlog validator:", "clean" if not problems else problems)
print(format_report(timing_report(log)))
print("\nPGN:\n" + log.pgn)
