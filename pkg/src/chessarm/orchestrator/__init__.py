"""Gameplay and data-collection pipelines, logging, and the console service."""

from .clock import VirtualClock
from .collect import (
    CollectionRun,
    RelocationStep,
    apply_relocations,
    plan_shift_realization,
    run_data_collection,
)
from .config import (
    CaptureGeometry,
    ConfigError,
    PipelineConfig,
    SimTimings,
    load_config,
    with_seed,
)
from .console import ConsoleServer, PortInUse, serve_console
from .events import (
    EventRecorder,
    GameEvent,
    PoseState,
    STATE_GRAPH,
    SessionLog,
    TimingRecord,
    validate_event_log,
)
from .opponents import EngineOpponent, ScriptedOpponent, resolve_move_text
from .pipeline import GamePipeline, InvalidCommand, run_gameplay
from .rig import CaptureRig, SimulatedTable, synthetic_calibration
from .timing import EmptyLog, PhaseSummary, format_report, timing_report

__all__ = [
    "CaptureGeometry",
    "CaptureRig",
    "CollectionRun",
    "ConfigError",
    "ConsoleServer",
    "EmptyLog",
    "EngineOpponent",
    "EventRecorder",
    "GameEvent",
    "GamePipeline",
    "InvalidCommand",
    "PhaseSummary",
    "PipelineConfig",
    "PortInUse",
    "PoseState",
    "RelocationStep",
    "STATE_GRAPH",
    "ScriptedOpponent",
    "SessionLog",
    "SimTimings",
    "SimulatedTable",
    "TimingRecord",
    "VirtualClock",
    "apply_relocations",
    "format_report",
    "load_config",
    "plan_shift_realization",
    "resolve_move_text",
    "run_data_collection",
    "run_gameplay",
    "serve_console",
    "synthetic_calibration",
    "timing_report",
    "validate_event_log",
    "with_seed",
]
