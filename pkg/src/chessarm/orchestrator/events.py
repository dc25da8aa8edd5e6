"""Session events, timing records, the event log, and its validator."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional


class PoseState(enum.Enum):
    INIT = "Init"
    HOVERING = "Hovering"
    READY = "Ready"
    CAPTURING = "Capturing"
    PERCEIVING = "Perceiving"
    ANALYSING = "Analysing"
    EXECUTING = "Executing"
    GESTURING = "Gesturing"
    HALTED = "Halted"
    GAME_OVER = "GameOver"


#: allowed pose-state transitions
STATE_GRAPH: Dict[PoseState, set] = {
    PoseState.INIT: {PoseState.HOVERING},
    PoseState.HOVERING: {PoseState.READY},
    PoseState.READY: {PoseState.CAPTURING, PoseState.GAME_OVER},
    PoseState.CAPTURING: {PoseState.PERCEIVING},
    PoseState.PERCEIVING: {PoseState.ANALYSING, PoseState.HALTED},
    PoseState.ANALYSING: {
        PoseState.GESTURING,
        PoseState.EXECUTING,
        PoseState.READY,
        PoseState.GAME_OVER,
    },
    PoseState.GESTURING: {PoseState.EXECUTING, PoseState.GAME_OVER},
    PoseState.EXECUTING: {PoseState.READY, PoseState.GAME_OVER},
    PoseState.HALTED: {PoseState.ANALYSING, PoseState.GAME_OVER},
    PoseState.GAME_OVER: set(),
}

EVENT_KINDS = {
    "state_change",
    "human_confirm",
    "perception",
    "move_inferred",
    "engine_result",
    "gesture",
    "sentence",
    "trajectory_started",
    "trajectory_done",
    "halt",
    "correction",
    "game_end",
}


@dataclass(frozen=True)
class GameEvent:
    seq: int
    t: float
    kind: str
    payload: dict

    def to_json(self) -> dict:
        return {"seq": self.seq, "t": round(self.t, 6), "kind": self.kind, **self.payload}


@dataclass(frozen=True)
class TimingRecord:
    phase: str  # detection / evaluation / search / execution
    duration: float
    move_number: int

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("duration must be non-negative")


@dataclass
class SessionLog:
    events: List[GameEvent] = field(default_factory=list)
    timings: List[TimingRecord] = field(default_factory=list)
    #: executed-trajectory samples: (command, t, x, y, z, gripper)
    trajectory_rows: List[tuple] = field(default_factory=list)
    result: Optional[str] = None
    final_fen: Optional[str] = None
    pgn: Optional[str] = None

    def save(self, directory) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        with open(directory / "events.ndjson", "w") as handle:
            for event in self.events:
                handle.write(json.dumps(event.to_json(), sort_keys=True) + "\n")
        with open(directory / "timings.ndjson", "w") as handle:
            for record in self.timings:
                handle.write(
                    json.dumps(
                        {
                            "phase": record.phase,
                            "duration": round(record.duration, 6),
                            "move_number": record.move_number,
                        }
                    )
                    + "\n"
                )
        if self.trajectory_rows:
            with open(directory / "trajectories.csv", "w") as handle:
                handle.write("command,t,x,y,z,gripper\n")
                for command, t, x, y, z, gripper in self.trajectory_rows:
                    handle.write(f"{command},{t},{x:.6f},{y:.6f},{z:.6f},{gripper}\n")
        if self.pgn:
            (directory / "game.pgn").write_text(self.pgn)
        return directory


class EventRecorder:
    """Orders events, stamps them from the session clock, and fans them out."""

    def __init__(self, clock):
        self.clock = clock
        self.log = SessionLog()
        self._seq = 0
        self._listeners: List[Callable[[GameEvent], None]] = []
        self._timing_listeners: List[Callable[[TimingRecord], None]] = []

    def subscribe(self, listener: Callable[[GameEvent], None]) -> None:
        self._listeners.append(listener)

    def subscribe_timing(self, listener: Callable[[TimingRecord], None]) -> None:
        self._timing_listeners.append(listener)

    def emit(self, event_kind: str, **payload) -> GameEvent:
        if event_kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {event_kind!r}")
        self._seq += 1
        event = GameEvent(self._seq, self.clock.now(), event_kind, payload)
        self.log.events.append(event)
        for listener in list(self._listeners):
            listener(event)
        return event

    def record_timing(self, phase: str, duration: float, move_number: int) -> TimingRecord:
        record = TimingRecord(phase, duration, move_number)
        self.log.timings.append(record)
        for listener in list(self._timing_listeners):
            listener(record)
        return record


def validate_event_log(events: List[GameEvent]) -> List[str]:
    """Structural checks over a finished event log; returns found problems.

    Verifies strictly increasing sequence numbers, non-decreasing
    timestamps, pose transitions confined to the state graph, and that
    every started trajectory finishes before the next return to Ready.
    """
    problems = []
    last_seq = 0
    last_t = float("-inf")
    pose: Optional[PoseState] = None
    outstanding_trajectory = False
    for event in events:
        if event.seq <= last_seq:
            problems.append(f"seq {event.seq} not increasing after {last_seq}")
        last_seq = event.seq
        if event.t < last_t:
            problems.append(f"timestamp went backwards at seq {event.seq}")
        last_t = event.t
        if event.kind == "state_change":
            nxt = PoseState(event.payload["state"])
            if pose is not None and nxt not in STATE_GRAPH[pose]:
                problems.append(f"illegal transition {pose.value} -> {nxt.value}")
            if nxt is PoseState.READY and outstanding_trajectory:
                problems.append(f"Ready at seq {event.seq} with a trajectory still open")
            pose = nxt
        elif event.kind == "trajectory_started":
            if outstanding_trajectory:
                problems.append(f"nested trajectory at seq {event.seq}")
            outstanding_trajectory = True
        elif event.kind == "trajectory_done":
            if not outstanding_trajectory:
                problems.append(f"trajectory_done without start at seq {event.seq}")
            outstanding_trajectory = False
    return problems
