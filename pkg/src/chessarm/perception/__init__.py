"""Crop windows, classifier backends, the correction loop, and datasets."""

from .backends import (
    BackendFailure,
    CaptureContext,
    ClassifierBackend,
    NoiseModel,
    NoisyOracleBackend,
    ScriptedBackend,
    WireBackend,
    classify_position,
)
from .correction import (
    Attempt,
    Halted,
    PerceptionOutcome,
    Resolved,
    RetakePolicy,
    perceive_with_correction,
)
from .crops import BoardNotVisible, CropWindow, compute_crop_windows, shift_crop_windows
from .dataset import (
    DEFAULT_BASE_FEN,
    CropSpec,
    DatasetManifest,
    ImageEntry,
    MissingCropSet,
    RotatedPiece,
    build_training_splits,
    generate_dataset_plan,
    key_squares,
    manifest_to_json,
    save_manifest,
)


def make_noisy_oracle(truth_source, noise: NoiseModel) -> NoisyOracleBackend:
    """A classifier backend that corrupts the true placement per the model."""
    return NoisyOracleBackend(truth_source, noise)


__all__ = [
    "Attempt",
    "BackendFailure",
    "BoardNotVisible",
    "CaptureContext",
    "ClassifierBackend",
    "CropSpec",
    "CropWindow",
    "DEFAULT_BASE_FEN",
    "DatasetManifest",
    "Halted",
    "ImageEntry",
    "MissingCropSet",
    "NoiseModel",
    "NoisyOracleBackend",
    "PerceptionOutcome",
    "Resolved",
    "RetakePolicy",
    "RotatedPiece",
    "ScriptedBackend",
    "WireBackend",
    "build_training_splits",
    "classify_position",
    "compute_crop_windows",
    "generate_dataset_plan",
    "key_squares",
    "make_noisy_oracle",
    "manifest_to_json",
    "perceive_with_correction",
    "save_manifest",
    "shift_crop_windows",
]
