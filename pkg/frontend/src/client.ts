// The console client: one WebSocket, strict seq ordering with an
// out-of-order buffer, command guards, and reconnect handling.

import { isValidFenSyntax } from "./fen.js";
import {
  ClientCommand,
  ReplyMessage,
  SequencedMessage,
  isSequenced,
  parseServerMessage,
} from "./protocol.js";
import { ConsoleState, applyMessage, initialState } from "./state.js";

/** The slice of the WebSocket API the client needs (injectable in tests). */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: string }) => void) | null;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ClientOptions {
  reconnectDelayMs?: number;
  onChange?: (state: ConsoleState) => void;
  onReply?: (reply: ReplyMessage) => void;
}

export class ConsoleClient {
  state: ConsoleState = initialState();
  /** true while a submitted move awaits the robot's return to Ready */
  inputLocked = false;

  private socket: SocketLike | null = null;
  private expectedSeq: number | null = null;
  private reorderBuffer = new Map<number, SequencedMessage>();
  private pendingAsks: string[] = [];
  private closedByUser = false;

  constructor(
    private url: string,
    private factory: SocketFactory,
    private options: ClientOptions = {},
  ) {}

  connect(): void {
    this.closedByUser = false;
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      // a fresh stream may start at any seq; adopt the first one seen
      this.expectedSeq = null;
      this.reorderBuffer.clear();
    };
    socket.onmessage = (event) => this.handleRaw(event.data);
    socket.onclose = () => {
      this.socket = null;
      if (!this.closedByUser && this.options.reconnectDelayMs !== undefined) {
        setTimeout(() => this.connect(), this.options.reconnectDelayMs);
      }
    };
  }

  disconnect(): void {
    this.closedByUser = true;
    this.socket?.close();
    this.socket = null;
  }

  // --- inbound ---------------------------------------------------------------

  private handleRaw(raw: string): void {
    const message = parseServerMessage(raw);
    if (message === null) return;
    if (!isSequenced(message)) {
      this.options.onReply?.(message);
      return;
    }
    if (this.expectedSeq === null) {
      this.expectedSeq = message.seq;
    }
    if (message.seq < this.expectedSeq) return; // duplicate
    this.reorderBuffer.set(message.seq, message);
    while (this.expectedSeq !== null && this.reorderBuffer.has(this.expectedSeq)) {
      const next = this.reorderBuffer.get(this.expectedSeq)!;
      this.reorderBuffer.delete(this.expectedSeq);
      this.expectedSeq += 1;
      this.apply(next);
    }
  }

  private apply(message: SequencedMessage): void {
    const before = this.state.poseState;
    this.state = applyMessage(this.state, message);
    if (this.state.poseState === "Ready" && before !== "Ready") {
      this.inputLocked = false;
      this.flushPendingAsks();
    }
    if (this.state.result !== null) {
      this.inputLocked = true;
    }
    this.options.onChange?.(this.state);
  }

  // --- outbound commands --------------------------------------------------------

  private send(command: ClientCommand): boolean {
    if (this.socket === null) return false;
    this.socket.send(JSON.stringify(command));
    return true;
  }

  canMoveNow(): boolean {
    return (
      !this.inputLocked &&
      this.state.poseState === "Ready" &&
      this.state.halted === null &&
      this.state.result === null
    );
  }

  /**
   * Enter a move and confirm the turn in one gesture.  Returns an error
   * string when the move is blocked locally; server-side rejections come
   * back through onReply.
   */
  submitHumanMove(from: string, to: string, promotion?: string): string | null {
    if (!this.canMoveNow()) {
      return "not your turn";
    }
    const uci = from + to + (promotion ?? "");
    if (!/^[a-h][1-8][a-h][1-8][qrbn]?$/.test(uci)) {
      return `malformed move ${uci}`;
    }
    this.inputLocked = true;
    this.send({ type: "submit_move", uci });
    this.send({ type: "confirm_turn" });
    return null;
  }

  /** Re-enable move entry after a server-side rejection. */
  unlockAfterRejection(): void {
    if (this.state.poseState === "Ready") {
      this.inputLocked = false;
    }
  }

  /** Questions are queued while the robot is busy and sent at Ready. */
  askQuestion(text: string): boolean {
    const question = text.trim();
    if (question.length === 0) return false;
    if (this.state.poseState !== "Ready") {
      this.pendingAsks.push(question);
      return true;
    }
    return this.send({ type: "ask", question });
  }

  private flushPendingAsks(): void {
    const queued = this.pendingAsks;
    this.pendingAsks = [];
    for (const question of queued) {
      this.send({ type: "ask", question });
    }
  }

  /** Client-side FEN syntax validation happens before anything is sent. */
  correctHalt(fen: string): string | null {
    if (this.state.halted === null) {
      return "nothing to correct";
    }
    if (!isValidFenSyntax(fen)) {
      return "that is not a well-formed FEN";
    }
    this.send({ type: "correct_position", fen });
    return null;
  }

  abort(): void {
    this.send({ type: "abort" });
  }
}
