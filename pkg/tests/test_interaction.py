"""Intent matching, prompt golden test, sentence queue, gesture policy."""

import json
import random
from pathlib import Path

import pytest

from chessarm.board import apply_move, parse_san, standard_start
from chessarm.engine import EngineScore, QualityLabel, ScoredLine
from chessarm.interaction import (
    GestureKind,
    GesturePolicy,
    Intent,
    IntentKind,
    MissingAnalysis,
    MockLLMBackend,
    MoveAnalysis,
    PAYLOAD_KEYS,
    SentenceQueue,
    build_prompt,
    decide_gesture,
    match_intent,
    push_stream,
    system_message,
)

FIXTURES = Path(__file__).parent / "fixtures"


def italian_position():
    state = standard_start()
    for text in ("e4", "e5", "Nf3", "Nc6"):
        state = apply_move(state, parse_san(state, text))
    return state


def line_from_sans(state, sans, score=EngineScore.cp(34), depth=20):
    moves = []
    cursor = state
    for text in sans:
        move = parse_san(cursor, text)
        moves.append(move)
        cursor = apply_move(cursor, move)
    return ScoredLine(rank=1, move=moves[0], score=score, pv=tuple(moves), depth=depth)


class TestMatchIntent:
    def test_explain(self):
        assert match_intent("can you explain the last move").kind is IntentKind.EXPLAIN_LAST

    def test_predict(self):
        assert match_intent("please predict the next move").kind is IntentKind.PREDICT_NEXT
        assert match_intent("Analyze this!").kind is IntentKind.PREDICT_NEXT

    def test_no_keywords(self):
        assert match_intent("nice weather today").kind is IntentKind.NONE

    def test_total_over_arbitrary_text(self):
        rng = random.Random(1)
        alphabet = "abcdefghijklmnopqrstuvwxyz ?!"
        for _ in range(200):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 40)))
            assert match_intent(text).kind in IntentKind


class TestBuildPrompt:
    def test_golden_user_message(self):
        state = italian_position()
        line = line_from_sans(
            state, ["Bc4", "Bc5", "d3", "Nf6", "O-O", "d6", "c3", "O-O", "h3", "h6"]
        )
        analysis = MoveAnalysis(reference=state, line=line, label=QualityLabel.EXCELLENT)
        intent = Intent(IntentKind.PREDICT_NEXT, "can you explain?")
        bundle = build_prompt(intent, state, analysis)
        golden = (FIXTURES / "golden_user_message.txt").read_text()
        assert bundle.user_message() == golden

    def test_payload_keys_complete_and_ordered(self):
        state = italian_position()
        line = line_from_sans(state, ["Bc4", "Bc5"])
        analysis = MoveAnalysis(state, line, QualityLabel.GOOD)
        bundle = build_prompt(Intent(IntentKind.PREDICT_NEXT, "q"), state, analysis)
        assert tuple(k for k, _v in bundle.payload) == PAYLOAD_KEYS

    def test_explain_first_move(self):
        start = standard_start()
        line = line_from_sans(start, ["e4", "e5", "Nf3"])
        state = apply_move(start, line.pv[0])
        analysis = MoveAnalysis(reference=start, line=line, label=QualityLabel.EXCELLENT)
        bundle = build_prompt(Intent(IntentKind.EXPLAIN_LAST, "explain"), state, analysis)
        payload = dict(bundle.payload)
        assert payload["history"] == "1. e4"
        assert payload["move"] == "e4"
        assert payload["future"].startswith("e4 e5 ")

    def test_explain_without_history(self):
        state = standard_start()
        with pytest.raises(MissingAnalysis):
            build_prompt(Intent(IntentKind.EXPLAIN_LAST, "explain"), state, None)

    def test_missing_analysis(self):
        state = italian_position()
        with pytest.raises(MissingAnalysis):
            build_prompt(Intent(IntentKind.PREDICT_NEXT, "predict"), state, None)

    def test_future_truncated_to_ten_plies(self):
        state = standard_start()
        sans = ["e4", "e5", "Nf3", "Nc6", "Bc4", "Bc5", "d3", "Nf6", "c3", "d6", "h3", "a6"]
        line = line_from_sans(state, sans)
        analysis = MoveAnalysis(state, line, QualityLabel.EXCELLENT)
        bundle = build_prompt(Intent(IntentKind.PREDICT_NEXT, "q"), state, analysis)
        future = dict(bundle.payload)["future"]
        assert len(future.split()) == 10

    def test_system_message_shape(self):
        text = system_message()
        assert text.startswith("You are a helpful chess assistant.")
        assert text.endswith("Input:")
        for key in PAYLOAD_KEYS:
            assert f"'{key}'" in text


class TestSentenceQueue:
    def test_chunks_complete_one_sentence(self):
        queue = SentenceQueue()
        assert push_stream(queue, "Sure,") == []
        done = push_stream(queue, " I can assist with that.")
        assert done == ["Sure, I can assist with that."]

    def test_unterminated_text_stays_pending(self):
        queue = SentenceQueue()
        assert push_stream(queue, "Hello") == []
        assert queue.pending == "Hello"
        assert len(queue) == 0

    def test_multiple_terminators(self):
        queue = SentenceQueue()
        done = push_stream(queue, "A. B. C.")
        assert done == ["A.", " B.", " C."]

    def test_conservation(self):
        rng = random.Random(5)
        text = "One two three. Four five! Six? Seven eight nine ten. And some trailing text"
        queue = SentenceQueue()
        collected = []
        i = 0
        while i < len(text):
            step = rng.randint(1, 7)
            collected += push_stream(queue, text[i : i + step])
            i += step
        assert "".join(collected) + queue.pending == text

    def test_decimal_numbers_not_split(self):
        queue = SentenceQueue()
        done = push_stream(queue, "The score was 3.5 points today.")
        assert done == ["The score was 3.5 points today."]

    def test_length_cap_fallback(self):
        queue = SentenceQueue(max_sentence_length=20)
        done = push_stream(queue, "word " * 10)
        assert done
        assert all(len(s) <= 20 for s in done)
        assert "".join(done) + queue.pending == "word " * 10

    def test_pop_order(self):
        queue = SentenceQueue()
        push_stream(queue, "First. Second. Third.")
        assert queue.pop() == "First."
        assert queue.pop() == " Second."
        assert queue.drain() == [" Third."]
        assert queue.pop() is None


class TestGestures:
    def test_zero_drop_nods(self):
        assert decide_gesture(0.6, 0.6) is GestureKind.NOD

    def test_large_drop_shakes(self):
        assert decide_gesture(0.7, 0.5) is GestureKind.SHAKE

    def test_between_thresholds_is_neutral(self):
        assert decide_gesture(0.6, 0.55) is GestureKind.NONE

    def test_boundaries(self):
        from chessarm.interaction import gesture_for_drop

        policy = GesturePolicy()
        assert gesture_for_drop(0.0, policy) is GestureKind.NOD
        assert gesture_for_drop(policy.nod_threshold, policy) is GestureKind.NOD
        assert gesture_for_drop(policy.shake_threshold, policy) is GestureKind.SHAKE
        assert gesture_for_drop(1.0, policy) is GestureKind.SHAKE
        assert decide_gesture(1.0, 0.0, policy) is GestureKind.SHAKE

    def test_improvement_clamps_to_zero_drop(self):
        assert decide_gesture(0.4, 0.9) is GestureKind.NOD

    def test_monotone(self):
        rng = random.Random(2)
        order = [GestureKind.NOD, GestureKind.NONE, GestureKind.SHAKE]
        for _ in range(300):
            a, b = rng.random(), rng.random()
            lo, hi = sorted((a, b))
            g_small = decide_gesture(1.0, 1.0 - lo)
            g_big = decide_gesture(1.0, 1.0 - hi)
            assert order.index(g_small) <= order.index(g_big)

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            GesturePolicy(shake_threshold=0.02, nod_threshold=0.1)


class TestMockLLM:
    def test_replay_and_exhaustion(self):
        backend = MockLLMBackend([["Sure, ", "done."], ["Second answer."]])
        state = italian_position()
        line = line_from_sans(state, ["Bc4", "Bc5"])
        bundle = build_prompt(
            Intent(IntentKind.PREDICT_NEXT, "q"),
            state,
            MoveAnalysis(state, line, QualityLabel.GOOD),
        )
        assert list(backend.stream(bundle)) == ["Sure, ", "done."]
        assert list(backend.stream(bundle)) == ["Second answer."]
        assert list(backend.stream(bundle)) == ["Second answer."]
        assert len(backend.requests) == 3

    def test_fixture_loading(self, tmp_path):
        path = tmp_path / "responses.json"
        path.write_text(json.dumps([["Hello. ", "World."]]))
        backend = MockLLMBackend.from_fixture(path)
        assert backend.responses == [["Hello. ", "World."]]


class TestHttpLLM:
    def test_streams_sse_chunks(self):
        import httpx

        from chessarm.interaction import HttpLLMBackend

        body = "\n".join(
            [
                'data: {"choices": [{"delta": {"content": "Sure, "}}]}',
                'data: {"choices": [{"delta": {"content": "I can assist."}}]}',
                "data: [DONE]",
            ]
        )

        def handler(request):
            payload = json.loads(request.content)
            assert payload["stream"] is True
            assert payload["messages"][0]["role"] == "system"
            return httpx.Response(200, text=body)

        client = httpx.Client(transport=httpx.MockTransport(handler))
        backend = HttpLLMBackend("http://llm.test/v1/chat", "test-model", client=client)
        state = italian_position()
        line = line_from_sans(state, ["Bc4", "Bc5"])
        bundle = build_prompt(
            Intent(IntentKind.PREDICT_NEXT, "q"),
            state,
            MoveAnalysis(state, line, QualityLabel.GOOD),
        )
        assert list(backend.stream(bundle)) == ["Sure, ", "I can assist."]
