"""Dataset-plan generation: the shifted-placement photo schedule, the crop
sets built from it, key-square training splits, and manifest persistence.

The photo schedule walks 8 column positions; inside each, 4 row positions.
Row translations are physical and cumulative: after the fourth row position
one more translation runs before every column shift, so odd columns carry a
four-rank offset.  Five orientations are recorded per position: r0 is
unrotated, kings are turned in r1-r2, knights in r1-r4, 45 degrees a step.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..board.core import ALL_PIECES, ALL_SQUARES, Piece, PieceKind, Placement, Square, emit_fen
from ..board.transforms import shift_placement
from .crops import CropWindow, shift_crop_windows

#: the 63-piece layout the photo schedule starts from (one rook absent)
DEFAULT_BASE_FEN = "pppppppp/1nbqkbnr/PPPPPPPP/RNBQKBNR/PPPPPPPP/rnbqkbnr/pppppppp/RNBQKBNR"


def _default_rotated() -> Tuple[Piece, ...]:
    from ..board.core import Color

    return (
        Piece(PieceKind.KING, Color.WHITE),
        Piece(PieceKind.KING, Color.BLACK),
        Piece(PieceKind.KNIGHT, Color.WHITE),
        Piece(PieceKind.KNIGHT, Color.BLACK),
    )


SHIFT_DIRECTIONS = ("up", "down", "left", "right")


class MissingCropSet(KeyError):
    pass


@dataclass(frozen=True)
class RotatedPiece:
    square: Square
    piece: Piece
    angle_degrees: float


@dataclass(frozen=True)
class ImageEntry:
    name: str  # img_C{X}_R{Y}_r{Z}
    column: int
    row: int
    orientation: int  # 0..4
    placement: Placement
    rotated: Tuple[RotatedPiece, ...]

    @property
    def label_fen(self) -> str:
        return emit_fen(self.placement)


@dataclass(frozen=True)
class CropSpec:
    image: str
    square: Square
    label: str  # FEN letter or "empty"
    window: Optional[Tuple[int, int, int, int]] = None
    shift: Optional[str] = None  # for the displaced set
    angle_degrees: Optional[float] = None  # for the rotated set


@dataclass
class DatasetManifest:
    base_fen: str
    images: List[ImageEntry]
    crop_sets: Dict[str, List[CropSpec]]
    splits: Dict[str, dict] = field(default_factory=dict)

    def coverage(self, crop_set: str = "D") -> Dict[str, object]:
        """Which (label, square) pairs the set covers, and which it misses.

        Labels are the 12 piece letters plus "empty"; the report carries
        the exception list so callers can attribute the gaps.
        """
        specs = self.crop_sets.get(crop_set)
        if specs is None:
            raise MissingCropSet(crop_set)
        covered: Set[Tuple[str, str]] = {(s.label, s.square.name) for s in specs}
        all_labels = [p.letter for p in ALL_PIECES] + ["empty"]
        missing = [
            (label, square.name)
            for label in all_labels
            for square in ALL_SQUARES
            if (label, square.name) not in covered
        ]
        return {"covered": len(covered), "missing": missing}


def _rotation_annotations(
    placement: Placement, orientation: int, rotated_kinds: Sequence[Piece]
) -> Tuple[RotatedPiece, ...]:
    """Which pieces are physically turned in orientation r1..r4.

    Knights take four 45-degree steps; every other rotated kind takes two.
    """
    if orientation == 0:
        return ()
    out = []
    for index, piece in placement.occupied():
        if piece not in rotated_kinds:
            continue
        steps = 4 if piece.kind is PieceKind.KNIGHT else 2
        if orientation <= steps:
            out.append(
                RotatedPiece(Square.from_index(index), piece, 45.0 * orientation)
            )
    return tuple(out)


def generate_dataset_plan(
    base: Placement,
    rotated_kinds: Optional[Sequence[Piece]] = None,
    windows: Optional[Sequence[CropWindow]] = None,
) -> DatasetManifest:
    """Build the full image/label plan from a base placement.

    8 column positions x 4 row positions x 5 orientations = 160 images.
    The default crop set D takes all 64 squares of the 32 unrotated
    images; R collects every rotated-piece sub-image from r1-r4; S is D
    with windows displaced a quarter square in each of four directions.
    When `windows` (the 64 live crop windows) is given, every spec carries
    its pixel rect; otherwise rects stay unset and the plan is geometric.
    """
    if all(cell is None for cell in base.cells):
        raise ValueError("base placement must contain pieces")
    rotated_kinds = tuple(rotated_kinds) if rotated_kinds is not None else _default_rotated()
    window_by_square = {w.square: w for w in windows} if windows else {}
    shifted_windows = {
        direction: {w.square: w for w in shift_crop_windows(list(windows), direction)}
        for direction in SHIFT_DIRECTIONS
    } if windows else {}

    images: List[ImageEntry] = []
    d_set: List[CropSpec] = []
    r_set: List[CropSpec] = []
    s_set: List[CropSpec] = []

    current = base
    for column in range(8):
        for row in range(4):
            for orientation in range(5):
                name = f"img_C{column}_R{row}_r{orientation}"
                entry = ImageEntry(
                    name=name,
                    column=column,
                    row=row,
                    orientation=orientation,
                    placement=current,
                    rotated=_rotation_annotations(current, orientation, rotated_kinds),
                )
                images.append(entry)
                if orientation == 0:
                    for square in ALL_SQUARES:
                        piece = current.at(square)
                        label = piece.letter if piece else "empty"
                        window = window_by_square.get(square)
                        d_set.append(
                            CropSpec(name, square, label, window.rect if window else None)
                        )
                        for direction in SHIFT_DIRECTIONS:
                            s_window = (
                                shifted_windows[direction][square]
                                if shifted_windows
                                else None
                            )
                            s_set.append(
                                CropSpec(
                                    name,
                                    square,
                                    label,
                                    s_window.rect if s_window else None,
                                    shift=direction,
                                )
                            )
                else:
                    for annotation in entry.rotated:
                        window = window_by_square.get(annotation.square)
                        r_set.append(
                            CropSpec(
                                name,
                                annotation.square,
                                annotation.piece.letter,
                                window.rect if window else None,
                                angle_degrees=annotation.angle_degrees,
                            )
                        )
            if row < 3:
                current = shift_placement(current, "row", 1)
        # the row translation restoring R0 is itself physical, so each
        # column shift starts from a four-rank offset of the previous base
        current = shift_placement(current, "row", 1)
        current = shift_placement(current, "column", 1)
    return DatasetManifest(
        base_fen=emit_fen(base),
        images=images,
        crop_sets={"D": d_set, "R": r_set, "S": s_set},
    )


# --- key-square training splits ---------------------------------------------

KEY_SQUARE_SETS = {
    # files x ranks intersections the training samples are drawn from
    "3x3": ("aeh", (1, 4, 8)),
    "4x4": ("adeh", (1, 4, 5, 8)),
}

AUGMENTATION_RANGES = {
    "brightness": (-0.20, 0.20),
    "hue": (-0.20, 0.20),
    "saturation": (-0.20, 0.20),
    "contrast": (-0.30, 0.30),
    "scale": (0.8, 1.2),
    "translation": (-0.03, 0.10),
}


def key_squares(which: str) -> Set[str]:
    try:
        files, ranks = KEY_SQUARE_SETS[which]
    except KeyError:
        raise ValueError(f"key_squares must be one of {sorted(KEY_SQUARE_SETS)}") from None
    return {f"{f}{r}" for f in files for r in ranks}


def _sample_augmentation(rng: random.Random) -> Dict[str, float]:
    return {
        name: round(rng.uniform(lo, hi), 6) for name, (lo, hi) in AUGMENTATION_RANGES.items()
    }


def build_training_splits(
    manifest: DatasetManifest,
    key_squares_kind: str = "4x4",
    composition: str = "d",
    seed: int = 0,
) -> Dict[str, dict]:
    """Select training samples on the key squares and split the rest.

    Training set "d" takes one randomly chosen D sub-image per (piece,
    key-square) pair; composition "d+r" adds the 90-degree rotated
    key-square samples from R, "d+rr" adds every rotation.  The remaining
    D sub-images are shuffled with the seed and split 20:80 into
    validation and test.  Each training sample carries sampled pixel
    augmentation parameters as metadata.
    """
    if composition not in ("d", "d+r", "d+rr"):
        raise ValueError(f"unknown composition {composition!r}")
    squares = key_squares(key_squares_kind)
    d_specs = manifest.crop_sets.get("D")
    if d_specs is None:
        raise MissingCropSet("D")
    rng = random.Random(seed)

    candidates: Dict[Tuple[str, str], List[int]] = {}
    for index, spec in enumerate(d_specs):
        if spec.square.name in squares and spec.label != "empty":
            candidates.setdefault((spec.label, spec.square.name), []).append(index)
    train_indices = [
        rng.choice(sorted(indices)) for _, indices in sorted(candidates.items())
    ]

    extra_rotated: List[dict] = []
    if composition in ("d+r", "d+rr"):
        r_specs = manifest.crop_sets.get("R")
        if not r_specs:
            raise MissingCropSet("R")
        wanted_angles = (90.0,) if composition == "d+r" else (45.0, 90.0, 135.0, 180.0)
        rotated_candidates: Dict[Tuple[str, str, float], List[int]] = {}
        for index, spec in enumerate(r_specs):
            if spec.square.name in squares and spec.angle_degrees in wanted_angles:
                rotated_candidates.setdefault(
                    (spec.label, spec.square.name, spec.angle_degrees), []
                ).append(index)
        for _, indices in sorted(rotated_candidates.items()):
            extra_rotated.append(
                {"set": "R", "index": rng.choice(sorted(indices)),
                 "augmentation": _sample_augmentation(rng)}
            )

    remainder = [i for i in range(len(d_specs)) if i not in set(train_indices)]
    rng.shuffle(remainder)
    val_count = round(0.2 * len(remainder))
    splits = {
        "train": {
            "samples": [
                {"set": "D", "index": i, "augmentation": _sample_augmentation(rng)}
                for i in train_indices
            ]
            + extra_rotated,
        },
        "val": {"samples": [{"set": "D", "index": i} for i in remainder[:val_count]]},
        "test": {"samples": [{"set": "D", "index": i} for i in remainder[val_count:]]},
        "config": {
            "key_squares": key_squares_kind,
            "composition": composition,
            "seed": seed,
        },
    }
    manifest.splits[f"{key_squares_kind}/{composition}"] = splits
    return splits


# --- persistence --------------------------------------------------------------


def _spec_to_json(spec: CropSpec) -> dict:
    out = {"image": spec.image, "square": spec.square.name, "label": spec.label}
    if spec.window is not None:
        out["window"] = list(spec.window)
    if spec.shift is not None:
        out["shift"] = spec.shift
    if spec.angle_degrees is not None:
        out["angle_degrees"] = spec.angle_degrees
    return out


def manifest_to_json(manifest: DatasetManifest) -> dict:
    return {
        "base_fen": manifest.base_fen,
        "images": [
            {
                "name": entry.name,
                "column": entry.column,
                "row": entry.row,
                "orientation": entry.orientation,
                "label_fen": entry.label_fen,
                "rotated": [
                    {
                        "square": rp.square.name,
                        "piece": rp.piece.letter,
                        "angle_degrees": rp.angle_degrees,
                    }
                    for rp in entry.rotated
                ],
            }
            for entry in manifest.images
        ],
        "crop_sets": {
            name: [_spec_to_json(s) for s in specs]
            for name, specs in sorted(manifest.crop_sets.items())
        },
        "splits": manifest.splits,
    }


def save_manifest(manifest: DatasetManifest, directory) -> Path:
    """Write manifest.json plus one .fen label sidecar per image."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest_to_json(manifest), indent=2, sort_keys=True) + "\n")
    labels = directory / "labels"
    labels.mkdir(exist_ok=True)
    for entry in manifest.images:
        (labels / f"{entry.name}.fen").write_text(entry.label_fen + "\n")
    return path
