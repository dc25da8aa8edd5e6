// The client-side mirror of the robot session.  applyMessage is pure and
// assumes in-order delivery; sequencing lives in the client.

import { ParsedFen, diffSquares, parseFen } from "./fen.js";
import { SequencedMessage } from "./protocol.js";

export interface TimingEntry {
  phase: string;
  seconds: number;
}

export interface HaltInfo {
  reason: string;
  observedFen: string;
}

export interface ConsoleState {
  fen: string | null;
  parsed: ParsedFen | null;
  poseState: string;
  lastGesture: string | null;
  transcript: string[];
  timings: TimingEntry[];
  halted: HaltInfo | null;
  /** squares whose content changed in the latest position update */
  lastChanged: string[];
  result: string | null;
  lastSeq: number;
}

export function initialState(): ConsoleState {
  return {
    fen: null,
    parsed: null,
    poseState: "Disconnected",
    lastGesture: null,
    transcript: [],
    timings: [],
    halted: null,
    lastChanged: [],
    result: null,
    lastSeq: 0,
  };
}

export function applyMessage(state: ConsoleState, message: SequencedMessage): ConsoleState {
  const next: ConsoleState = { ...state, lastSeq: message.seq };
  switch (message.type) {
    case "state_update": {
      const parsed = parseFen(message.fen);
      next.poseState = message.pose_state;
      if (parsed !== null && state.parsed !== null && message.fen !== state.fen) {
        next.lastChanged = diffSquares(state.parsed, parsed);
      } else if (parsed === null || message.fen !== state.fen) {
        next.lastChanged = [];
      }
      next.fen = message.fen;
      next.parsed = parsed;
      if (message.pose_state !== "Halted") {
        next.halted = null;
      }
      return next;
    }
    case "gesture":
      next.lastGesture = message.kind;
      return next;
    case "sentence":
      next.transcript = [...state.transcript, message.text];
      return next;
    case "timing":
      next.timings = [...state.timings, { phase: message.phase, seconds: message.seconds }];
      return next;
    case "halt":
      next.halted = { reason: message.reason, observedFen: message.observed_fen };
      return next;
    case "game_end":
      next.result = message.result;
      return next;
  }
}
