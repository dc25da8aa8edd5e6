"""Classifier backends: the simulated noisy oracle, scripted fixtures, and
the newline-delimited-JSON wire protocol for external model servers."""

from __future__ import annotations

import abc
import json
import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

from ..board.core import ALL_PIECES, Piece, Placement, Square
from .crops import CropWindow


class BackendFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class CaptureContext:
    """What the classifier is told about the shot it is labeling."""

    attempt: str = "initial"  # initial / retake / viewpoint
    attempt_index: int = 0
    image_ref: str = "live"


class ClassifierBackend(abc.ABC):
    """Two-stage per-square recognition: occupancy, then piece identity."""

    @abc.abstractmethod
    def classify_occupancy(
        self, windows: Sequence[CropWindow], context: CaptureContext
    ) -> Dict[Square, str]:
        """"empty" or "occupied" for exactly the requested windows."""

    @abc.abstractmethod
    def classify_pieces(
        self, windows: Sequence[CropWindow], context: CaptureContext
    ) -> Dict[Square, Tuple[Piece, float]]:
        """(piece, confidence) for exactly the requested windows."""


def classify_position(
    backend: ClassifierBackend,
    windows: Sequence[CropWindow],
    context: CaptureContext,
) -> Placement:
    """Run occupancy over all windows, then pieces over the occupied ones."""
    occupancy = backend.classify_occupancy(windows, context)
    if set(occupancy) != {w.square for w in windows}:
        raise BackendFailure("occupancy response does not cover the request")
    occupied = [w for w in windows if occupancy[w.square] == "occupied"]
    cells = [None] * 64
    if occupied:
        pieces = backend.classify_pieces(occupied, context)
        if set(pieces) != {w.square for w in occupied}:
            raise BackendFailure("piece response does not cover the request")
        for square, (piece, _confidence) in pieces.items():
            cells[square.index] = piece
    return Placement(tuple(cells))


@dataclass(frozen=True)
class NoiseModel:
    """Simulated recognition error rates standing in for a trained model."""

    occupancy_flip_rate: float = 0.0
    piece_confusion_rate: float = 0.0
    viewpoint_improvement_factor: float = 1.0
    retake_improvement_factor: float = 1.0
    seed: int = 0

    def __post_init__(self):
        for name in ("occupancy_flip_rate", "piece_confusion_rate"):
            rate = getattr(self, name)
            if not (0.0 <= rate <= 1.0):
                raise ValueError(f"{name} must be a probability")
        for name in ("viewpoint_improvement_factor", "retake_improvement_factor"):
            factor = getattr(self, name)
            if not (0.0 < factor <= 1.0):
                raise ValueError(f"{name} must lie in (0, 1]")

    def factor(self, attempt: str) -> float:
        if attempt == "retake":
            return self.retake_improvement_factor
        if attempt == "viewpoint":
            return self.viewpoint_improvement_factor
        return 1.0


class NoisyOracleBackend(ClassifierBackend):
    """Reads the true placement and corrupts it with seeded, per-square
    independent errors; retake/viewpoint attempts see scaled-down rates.
    Fully deterministic given the model seed and the context's attempt
    index."""

    def __init__(self, truth_source: Callable[[], Placement], noise: NoiseModel):
        self.truth_source = truth_source
        self.noise = noise

    def _rng(self, context: CaptureContext, stage: str) -> random.Random:
        return random.Random(f"{self.noise.seed}:{context.attempt_index}:{stage}")

    def classify_occupancy(self, windows, context):
        truth = self.truth_source()
        rng = self._rng(context, "occupancy")
        rate = self.noise.occupancy_flip_rate * self.noise.factor(context.attempt)
        out = {}
        for window in windows:
            occupied = truth.at(window.square) is not None
            if rng.random() < rate:
                occupied = not occupied
            out[window.square] = "occupied" if occupied else "empty"
        return out

    def classify_pieces(self, windows, context):
        truth = self.truth_source()
        rng = self._rng(context, "piece")
        rate = self.noise.piece_confusion_rate * self.noise.factor(context.attempt)
        out = {}
        for window in windows:
            actual = truth.at(window.square)
            if actual is None:
                # phantom occupancy: nothing there, so any of the 12 shows up
                label = rng.choice(ALL_PIECES)
            elif rng.random() < rate:
                label = rng.choice([p for p in ALL_PIECES if p != actual])
            else:
                label = actual
            out[window.square] = (label, max(0.0, 1.0 - rate))
        return out


class ScriptedBackend(ClassifierBackend):
    """Replays a fixed list of placements, one per classification attempt.

    The last placement repeats once the script runs out, so "always wrong"
    fixtures need only one entry.
    """

    def __init__(self, placements: Sequence[Placement]):
        if not placements:
            raise ValueError("need at least one scripted placement")
        self.placements = list(placements)
        self.calls = 0
        self._active = self.placements[0]

    def classify_occupancy(self, windows, context):
        # occupancy opens every attempt; advance the script here and pin
        # the same placement for the attempt's piece stage
        self._active = self.placements[min(self.calls, len(self.placements) - 1)]
        self.calls += 1
        return {
            w.square: "occupied" if self._active.at(w.square) is not None else "empty"
            for w in windows
        }

    def classify_pieces(self, windows, context):
        out = {}
        for window in windows:
            piece = self._active.at(window.square)
            if piece is None:
                raise BackendFailure(f"scripted placement has no piece on {window.square.name}")
            out[window.square] = (piece, 1.0)
        return out


class WireBackend(ClassifierBackend):
    """Speaks the classifier wire protocol over a byte stream.

    Each request is one JSON line: {request_id, kind, attempt, windows:
    [{square, rect}], image_ref}; the response must echo request_id and
    carry labels [{square, label, confidence}].  Occupancy labels are
    "empty"/"occupied"; piece labels are FEN letters.
    """

    def __init__(self, reader, writer):
        self.reader = reader
        self.writer = writer
        self._next_id = 0

    def _round_trip(self, kind: str, windows, context: CaptureContext) -> List[dict]:
        self._next_id += 1
        request = {
            "request_id": self._next_id,
            "kind": kind,
            "attempt": context.attempt,
            "windows": [{"square": w.square.name, "rect": list(w.rect)} for w in windows],
            "image_ref": context.image_ref,
        }
        try:
            self.writer.write((json.dumps(request) + "\n").encode())
            self.writer.flush()
            line = self.reader.readline()
        except OSError as exc:
            raise BackendFailure(f"wire backend I/O failed: {exc}") from exc
        if not line:
            raise BackendFailure("wire backend closed the stream")
        try:
            response = json.loads(line)
        except json.JSONDecodeError as exc:
            raise BackendFailure(f"bad JSON from backend: {exc}") from exc
        if response.get("request_id") != self._next_id:
            raise BackendFailure("response does not match the outstanding request")
        labels = response.get("labels")
        if not isinstance(labels, list):
            raise BackendFailure("response carries no labels")
        return labels

    def classify_occupancy(self, windows, context):
        labels = self._round_trip("occupancy", windows, context)
        out = {}
        for entry in labels:
            if entry.get("label") not in ("empty", "occupied"):
                raise BackendFailure(f"bad occupancy label {entry!r}")
            out[Square.from_name(entry["square"])] = entry["label"]
        return out

    def classify_pieces(self, windows, context):
        labels = self._round_trip("piece", windows, context)
        out = {}
        for entry in labels:
            try:
                piece = Piece.from_letter(entry["label"])
            except Exception as exc:
                raise BackendFailure(f"bad piece label {entry!r}") from exc
            out[Square.from_name(entry["square"])] = (
                piece,
                float(entry.get("confidence", 1.0)),
            )
        return out
