"""chessarm: a hardware-free chess robot software stack.

Subpackages:
    board        position core, FEN, move generation, notation
    engine       UCI client, scripted stub engine, win-probability scoring
    geometry     camera model, marker pose estimation, board grid fitting
    perception   crop windows, classifier backends, correction loop, datasets
    motion       move-command codec, waypoint plans, trajectories, grasping
    interaction  intents, prompt building, sentence streaming, gestures
    orchestrator gameplay/data-collection pipelines, logging, console service
"""

__version__ = "0.1.0"
