"""UCI engine client, deterministic stub engine, and score mappings."""

from .scoring import (
    EngineScore,
    QualityLabel,
    QualityThresholds,
    WinProbParams,
    quality_label,
    score_to_winprob,
)
from .uci import (
    EngineConfig,
    EngineCrashed,
    EngineSession,
    EngineUnavailable,
    HandshakeTimeout,
    InfoLine,
    NoLegalMoves,
    ParseError,
    ScoredLine,
    analyse,
    open_session,
    parse_info_line,
    stub_engine_argv,
)

__all__ = [
    "EngineConfig",
    "EngineCrashed",
    "EngineScore",
    "EngineSession",
    "EngineUnavailable",
    "HandshakeTimeout",
    "InfoLine",
    "NoLegalMoves",
    "ParseError",
    "QualityLabel",
    "QualityThresholds",
    "ScoredLine",
    "WinProbParams",
    "analyse",
    "open_session",
    "parse_info_line",
    "quality_label",
    "score_to_winprob",
    "stub_engine_argv",
]
