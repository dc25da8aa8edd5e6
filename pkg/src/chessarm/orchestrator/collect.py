"""The data-collection pipeline: photo plan, crop windows, shift move plans."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from ..board.core import Placement, Square, parse_fen
from ..board.transforms import shift_placement
from ..geometry.pose import look_at_pose
from ..motion.trajectory import time_parameterize
from ..motion.waypoints import MotionLimits, pick_and_place
from ..perception.crops import compute_crop_windows
from ..perception.dataset import DatasetManifest, generate_dataset_plan, save_manifest
from .config import PipelineConfig
from .rig import synthetic_calibration

BUFFER = "buffer"


@dataclass(frozen=True)
class RelocationStep:
    """One pick-and-place in a shift realization; either endpoint may be the
    off-board buffer spot."""

    source: Union[Square, str]
    target: Union[Square, str]

    def describe(self) -> str:
        src = self.source if isinstance(self.source, str) else self.source.name
        dst = self.target if isinstance(self.target, str) else self.target.name
        return f"{src}->{dst}"


def plan_shift_realization(placement: Placement, axis: str, steps: int = 1) -> List[RelocationStep]:
    """Pick-and-place steps that physically realize one cyclic shift.

    Each rank/file line is an 8-cycle of cells.  A line with an empty cell
    rotates by walking pieces backwards into the hole; a full line parks
    one piece in the buffer, rotates the rest, and retrieves it.
    """
    if steps != 1:
        raise ValueError("shifts are realized one step at a time")
    if axis not in ("row", "column"):
        raise ValueError("axis must be 'row' or 'column'")
    out: List[RelocationStep] = []
    for line in range(8):
        if axis == "row":
            ring = [Square(line, rank) for rank in range(8)]  # destinations are +1 in rank
        else:
            ring = [Square(file, line) for file in range(8)]
        occupied = [placement.at(sq) is not None for sq in ring]
        if not any(occupied):
            continue
        holes = [i for i, filled in enumerate(occupied) if not filled]
        if holes:
            # rotate into the hole: repeatedly fill it from its predecessor
            hole = holes[0]
            for _ in range(7):
                prev = (hole - 1) % 8
                if occupied[prev]:
                    out.append(RelocationStep(ring[prev], ring[hole]))
                    occupied[hole], occupied[prev] = True, False
                hole = prev
        else:
            out.append(RelocationStep(ring[7], BUFFER))
            for i in range(7, 0, -1):
                out.append(RelocationStep(ring[i - 1], ring[i]))
            out.append(RelocationStep(BUFFER, ring[0]))
    return out


def apply_relocations(placement: Placement, steps: List[RelocationStep]) -> Placement:
    """Replay relocation steps on a placement (used to verify plans)."""
    cells = list(placement.cells)
    buffer_slot = None
    for step in steps:
        if isinstance(step.source, str):
            piece, buffer_slot = buffer_slot, None
        else:
            piece = cells[step.source.index]
            cells[step.source.index] = None
        if isinstance(step.target, str):
            buffer_slot = piece
        else:
            cells[step.target.index] = piece
    return Placement(tuple(cells))


def relocation_waypoints(step: RelocationStep, frame, limits: MotionLimits):
    """The jump-transport plan for one relocation; buffer = the bin point."""
    up = frame.pose.rotation[:, 2]
    bin_point = np.asarray(limits.bin_location, dtype=float)
    src = bin_point if isinstance(step.source, str) else frame.centers[step.source.index]
    dst = bin_point if isinstance(step.target, str) else frame.centers[step.target.index]
    return pick_and_place(src, dst, up, limits, jump=True)


@dataclass
class CollectionRun:
    manifest: DatasetManifest
    manifest_path: Optional[Path]
    transitions: List[dict]  # per-shift realization summaries


def run_data_collection(
    config: PipelineConfig, output_dir=None, with_motion_plans: bool = True
) -> CollectionRun:
    """Drive the photo schedule end to end.

    Calibrates the board synthetically, computes the 64 crop windows from
    the overhead capture pose, generates the full image/label plan, and,
    for every placement transition in the schedule, emits the relocation
    plan (with trajectory durations) that would physically realize it.
    Persists manifest + sidecars when output_dir is given.
    """
    base = parse_fen(config.collect_base_fen, mode="placement")
    frame = synthetic_calibration(
        config.camera, config.board_geometry, config.board_pose, config.capture_geometry
    )
    center = frame.centers.mean(axis=0)
    eye = center + np.array([0.0, 0.0, config.capture_geometry.hover_height])
    view = look_at_pose(eye, center, up_hint=(0.0, 1.0, 0.0))
    windows = compute_crop_windows(frame, config.camera, view)
    manifest = generate_dataset_plan(base, windows=windows)

    transitions: List[dict] = []
    if with_motion_plans:
        current = base
        # the schedule: 3 row shifts per column, a 4th restoring shift, then
        # the column shift; 8 columns
        sequence: List[Tuple[str, str]] = []
        for column in range(8):
            sequence += [("row", f"C{column}:R{r}->R{r + 1}") for r in range(3)]
            sequence.append(("row", f"C{column}:R3->R0"))
            sequence.append(("column", f"C{column}->C{(column + 1) % 8}"))
        for axis, tag in sequence:
            steps = plan_shift_realization(current, axis)
            duration = 0.0
            for step in steps:
                plan = relocation_waypoints(step, frame, config.limits)
                duration += time_parameterize(plan, config.limits).total_duration
            shifted = shift_placement(current, axis, 1)
            assert apply_relocations(current, steps) == shifted
            transitions.append(
                {
                    "tag": tag,
                    "axis": axis,
                    "steps": [s.describe() for s in steps],
                    "total_duration_s": round(duration, 3),
                }
            )
            current = shifted

    manifest_path = None
    if output_dir is not None:
        manifest_path = save_manifest(manifest, output_dir)
        if transitions:
            import json

            (Path(output_dir) / "shift_plans.json").write_text(
                json.dumps(transitions, indent=2) + "\n"
            )
    return CollectionRun(manifest, manifest_path, transitions)
