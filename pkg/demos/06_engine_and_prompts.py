"""
Engine analysis and prompt assembly
===================================

The bundled deterministic engine speaks plain UCI.  Its scores map to win
probabilities, moves get quality labels, and an analysis request becomes
the exact six-field prompt payload the assistant expects.
"""

from chessarm.board import apply_move, emit_fen, parse_san, standard_start
from chessarm.engine import (
    EngineConfig,
    EngineScore,
    QualityLabel,
    open_session,
    quality_label,
    score_to_winprob,
    stub_engine_argv,
)
from chessarm.interaction import Intent, IntentKind, MoveAnalysis, SentenceQueue, build_prompt

############################################################
# Scores to win probabilities: monotone, symmetric around 0.5.

for cp in (-400, -100, 0, 100, 400):
    print(f"{cp:>5} cp -> {score_to_winprob(EngineScore.cp(cp)):.3f}")
print("mate for the mover ->", score_to_winprob(EngineScore.mate(3)))

for drop in (0.0, 0.03, 0.07, 0.15, 0.4):
    print(f"win-prob drop {drop:.2f} -> {quality_label(drop).value}")

############################################################
# Ask the engine about the position after 1. e4 e5 2. Nf3 Nc6.

state = standard_start()
for text in ("e4", "e5", "Nf3", "Nc6"):
    state = apply_move(state, parse_san(state, text))

with open_session(EngineConfig(executable=stub_engine_argv(), multipv=3, depth=8)) as session:
    lines = session.analyse(emit_fen(state))
    for line in lines:
        pv = " ".join(m.uci for m in line.pv[:6])
        print(f"rank {line.rank}: {line.move.uci}  score {line.score.value:>4} cp  pv {pv}")

############################################################
# Build the assistant prompt for the top line and stream a canned reply
# through the sentence queue, the way the speech pipeline would.

analysis = MoveAnalysis(state, lines[0], QualityLabel.EXCELLENT)
bundle = build_prompt(Intent(IntentKind.PREDICT_NEXT, "what should I play?"), state, analysis)
print("\nsystem message starts:", bundle.system[:60], "...")
print("user message:", bundle.user_message())

queue = SentenceQueue()
for chunk in ("Sure, I can assist", " with that. Develop a piece", " and castle early."):
    for sentence in queue.push(chunk):
        print("sentence ready:", sentence.strip())
print("still pending:", repr(queue.pending))
