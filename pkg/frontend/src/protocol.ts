// The console wire protocol: JSON texts over one WebSocket.

export interface StateUpdate {
  type: "state_update";
  seq: number;
  fen: string;
  pose_state: string;
}

export interface GestureMessage {
  type: "gesture";
  seq: number;
  kind: string;
}

export interface SentenceMessage {
  type: "sentence";
  seq: number;
  text: string;
}

export interface TimingMessage {
  type: "timing";
  seq: number;
  phase: string;
  seconds: number;
}

export interface HaltMessage {
  type: "halt";
  seq: number;
  reason: string;
  observed_fen: string;
}

export interface GameEndMessage {
  type: "game_end";
  seq: number;
  result: string;
}

export interface ReplyMessage {
  type: "ok" | "error";
  message?: string;
}

export type SequencedMessage =
  | StateUpdate
  | GestureMessage
  | SentenceMessage
  | TimingMessage
  | HaltMessage
  | GameEndMessage;

export type ServerMessage = SequencedMessage | ReplyMessage;

export type ClientCommand =
  | { type: "confirm_turn" }
  | { type: "submit_move"; uci: string }
  | { type: "ask"; question: string }
  | { type: "correct_position"; fen: string }
  | { type: "abort" };

const SEQUENCED = new Set([
  "state_update",
  "gesture",
  "sentence",
  "timing",
  "halt",
  "game_end",
]);

export function isSequenced(message: ServerMessage): message is SequencedMessage {
  return SEQUENCED.has(message.type);
}

export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const message = data as Record<string, unknown>;
  const type = message.type;
  if (type === "ok" || type === "error") return message as unknown as ReplyMessage;
  if (typeof type !== "string" || !SEQUENCED.has(type)) return null;
  if (typeof message.seq !== "number") return null;
  return message as unknown as SequencedMessage;
}
