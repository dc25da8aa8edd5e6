"""Pipeline configuration: defaults, JSON overrides, validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from ..board.core import Color
from ..engine.scoring import QualityThresholds, WinProbParams
from ..engine.uci import EngineConfig
from ..geometry.camera import CameraModel
from ..geometry.fit import BoardGeometry
from ..geometry.pose import Pose
from ..interaction.gestures import GesturePolicy
from ..motion.waypoints import MotionLimits
from ..perception.backends import NoiseModel
from ..perception.correction import RetakePolicy
from ..perception.dataset import DEFAULT_BASE_FEN


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimTimings:
    """Virtual-clock costs of the simulated phases, seconds."""

    capture_s: float = 0.3
    classify_s: float = 0.6
    engine_eval_s: float = 0.5
    engine_search_s: float = 5.0
    gesture_s: float = 0.5


@dataclass(frozen=True)
class CaptureGeometry:
    """Where the simulated camera sits for each capture kind, in the base
    frame, relative to the board center."""

    hover_height: float = 0.8
    ready_offset: Tuple[float, float, float] = (0.0, -0.55, 0.45)
    viewpoint_shift: Tuple[float, float, float] = (0.18, 0.0, 0.0)


@dataclass
class PipelineConfig:
    engine: EngineConfig = field(default_factory=EngineConfig)
    camera: CameraModel = field(
        default_factory=lambda: CameraModel(fx=1200.0, fy=1200.0, cx=960.0, cy=540.0)
    )
    board_geometry: BoardGeometry = field(default_factory=BoardGeometry)
    #: board -> robot-base placement; files run +x, ranks +y away from the base
    board_pose: Pose = field(
        default_factory=lambda: Pose(np.eye(3), np.array([-0.24, 0.16, 0.0]))
    )
    noise: NoiseModel = field(default_factory=NoiseModel)
    limits: MotionLimits = field(default_factory=MotionLimits)
    gestures: GesturePolicy = field(default_factory=GesturePolicy)
    winprob: WinProbParams = field(default_factory=WinProbParams)
    quality: QualityThresholds = field(default_factory=QualityThresholds)
    retakes: RetakePolicy = field(default_factory=RetakePolicy)
    timings: SimTimings = field(default_factory=SimTimings)
    capture_geometry: CaptureGeometry = field(default_factory=CaptureGeometry)
    robot_color: Color = Color.WHITE
    gestures_enabled: bool = True
    eval_depth: int = 8
    collect_base_fen: str = DEFAULT_BASE_FEN
    console_host: str = "127.0.0.1"
    console_port: int = 8710
    seed: int = 0
    log_dir: Optional[str] = None


_SECTION_BUILDERS = {
    "engine": EngineConfig,
    "noise": NoiseModel,
    "limits": MotionLimits,
    "gestures": GesturePolicy,
    "winprob": WinProbParams,
    "quality": QualityThresholds,
    "retakes": RetakePolicy,
    "timings": SimTimings,
    "capture_geometry": CaptureGeometry,
}

_SCALAR_KEYS = {
    "robot_color",
    "gestures_enabled",
    "eval_depth",
    "collect_base_fen",
    "console_host",
    "console_port",
    "seed",
    "log_dir",
}


def load_config(path=None, **overrides) -> PipelineConfig:
    """Defaults, overlaid with a JSON config file, overlaid with kwargs.

    The file carries plain sections mirroring the dataclass fields, e.g.
    {"noise": {"occupancy_flip_rate": 0.02}, "seed": 7}; camera and board
    geometry may instead point at their own files via "camera_file" and
    "board_file".  Unknown keys are configuration errors.
    """
    config = PipelineConfig()
    data = {}
    if path is not None:
        file_path = Path(path)
        if not file_path.exists():
            raise ConfigError(f"config file {file_path} does not exist")
        try:
            data = json.loads(file_path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    data.update(overrides)

    for key, value in data.items():
        if key in _SECTION_BUILDERS:
            try:
                setattr(config, key, _SECTION_BUILDERS[key](**value))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad section {key!r}: {exc}") from exc
        elif key == "camera_file":
            camera_path = Path(value)
            if not camera_path.exists():
                raise ConfigError(f"camera file {camera_path} does not exist")
            config.camera = CameraModel.load(camera_path)
        elif key == "board_file":
            board_path = Path(value)
            if not board_path.exists():
                raise ConfigError(f"board file {board_path} does not exist")
            config.board_geometry = BoardGeometry.load(board_path)
        elif key == "robot_color":
            config.robot_color = Color(value)
        elif key in _SCALAR_KEYS:
            setattr(config, key, value)
        else:
            raise ConfigError(f"unknown config key {key!r}")
    return config


def with_seed(config: PipelineConfig, seed: int) -> PipelineConfig:
    """A copy with the master seed applied to every seeded component."""
    out = replace_shallow(config)
    out.seed = seed
    out.noise = replace(config.noise, seed=seed)
    return out


def replace_shallow(config: PipelineConfig) -> PipelineConfig:
    fields = {name: getattr(config, name) for name in config.__dataclass_fields__}
    return PipelineConfig(**fields)
