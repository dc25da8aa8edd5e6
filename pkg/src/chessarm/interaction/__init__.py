"""Intents, prompt assembly, sentence streaming, and gesture decisions."""

from .gestures import GestureKind, GesturePolicy, decide_gesture, gesture_for_drop
from .intents import Intent, IntentKind, match_intent
from .llm import HttpLLMBackend, LLMBackend, LLMError, MockLLMBackend
from .prompts import (
    MissingAnalysis,
    MoveAnalysis,
    PAYLOAD_KEYS,
    PromptBundle,
    build_prompt,
    render_future,
    system_message,
)
from .streamqueue import SentenceQueue, push_stream

__all__ = [
    "GestureKind",
    "GesturePolicy",
    "HttpLLMBackend",
    "Intent",
    "IntentKind",
    "LLMBackend",
    "LLMError",
    "MissingAnalysis",
    "MockLLMBackend",
    "MoveAnalysis",
    "PAYLOAD_KEYS",
    "PromptBundle",
    "SentenceQueue",
    "build_prompt",
    "decide_gesture",
    "gesture_for_drop",
    "match_intent",
    "push_stream",
    "render_future",
    "system_message",
]
