// Browser rendering: paints the model from board.ts and wires the inputs.

import { boardToFen, renderBoard } from "./board.js";
import { ConsoleClient } from "./client.js";
import { ConsoleState } from "./state.js";

const PIECE_GLYPHS: Record<string, string> = {
  K: "♔", Q: "♕", R: "♖", B: "♗", N: "♘", P: "♙",
  k: "♚", q: "♛", r: "♜", b: "♝", n: "♞", p: "♟",
};

export class ConsoleView {
  private selected: string | null = null;

  constructor(private root: HTMLElement, private client: ConsoleClient) {
    root.innerHTML = `
      <div class="layout">
        <div class="left">
          <div id="board" class="board"></div>
          <div class="statusline">
            <span id="pose" class="badge"></span>
            <span id="gesture" class="badge"></span>
            <span id="result" class="badge"></span>
          </div>
        </div>
        <div class="right">
          <form id="ask-form">
            <input id="ask-input" placeholder="ask: explain the last move / predict the next move" />
            <button type="submit">Ask</button>
          </form>
          <ol id="transcript"></ol>
          <table id="timings"><thead><tr><th>phase</th><th>s</th></tr></thead><tbody></tbody></table>
          <button id="abort">Abort session</button>
        </div>
      </div>
      <dialog id="halt-dialog">
        <p>Perception halted: <span id="halt-reason"></span></p>
        <p>Correct the position (FEN):</p>
        <textarea id="halt-fen" rows="2" cols="60"></textarea>
        <p id="halt-error" class="error"></p>
        <button id="halt-submit">Resume</button>
        <button id="halt-abort">Abort</button>
      </dialog>`;
    this.wire();
  }

  private element<T extends HTMLElement>(id: string): T {
    return this.root.querySelector(`#${id}`) as T;
  }

  private wire(): void {
    this.element<HTMLFormElement>("ask-form").addEventListener("submit", (event) => {
      event.preventDefault();
      const input = this.element<HTMLInputElement>("ask-input");
      if (this.client.askQuestion(input.value)) {
        input.value = "";
      }
    });
    this.element<HTMLButtonElement>("abort").addEventListener("click", () => {
      this.client.abort();
    });
    this.element<HTMLButtonElement>("halt-submit").addEventListener("click", () => {
      const fen = this.element<HTMLTextAreaElement>("halt-fen").value.trim();
      const error = this.client.correctHalt(fen);
      this.element<HTMLElement>("halt-error").textContent = error ?? "";
    });
    this.element<HTMLButtonElement>("halt-abort").addEventListener("click", () => {
      this.client.abort();
      this.element<HTMLDialogElement>("halt-dialog").close();
    });
  }

  update(state: ConsoleState): void {
    this.paintBoard(state);
    this.element<HTMLElement>("pose").textContent = state.poseState;
    const gesture = this.element<HTMLElement>("gesture");
    gesture.textContent = state.lastGesture ? `last gesture: ${state.lastGesture}` : "";
    gesture.className = `badge gesture-${state.lastGesture ?? "none"}`;
    this.element<HTMLElement>("result").textContent = state.result
      ? `game over: ${state.result}`
      : "";

    const transcript = this.element<HTMLOListElement>("transcript");
    transcript.innerHTML = "";
    for (const sentence of state.transcript) {
      const item = document.createElement("li");
      item.textContent = sentence;
      transcript.appendChild(item);
    }

    const body = this.element<HTMLTableElement>("timings").querySelector("tbody")!;
    body.innerHTML = "";
    for (const entry of state.timings.slice(-12)) {
      const row = document.createElement("tr");
      row.innerHTML = `<td>${entry.phase}</td><td>${entry.seconds.toFixed(2)}</td>`;
      body.appendChild(row);
    }

    const dialog = this.element<HTMLDialogElement>("halt-dialog");
    if (state.halted !== null) {
      this.element<HTMLElement>("halt-reason").textContent = state.halted.reason;
      const fenBox = this.element<HTMLTextAreaElement>("halt-fen");
      if (!dialog.open) {
        fenBox.value = state.halted.observedFen;
        dialog.showModal();
      }
    } else if (dialog.open) {
      dialog.close();
    }
  }

  private paintBoard(state: ConsoleState): void {
    const board = renderBoard(state);
    const container = this.element<HTMLDivElement>("board");
    container.innerHTML = "";
    if (board.rows === null) {
      const fallback = document.createElement("pre");
      fallback.textContent = board.fallback ?? "(no position yet)";
      container.appendChild(fallback);
      return;
    }
    container.dataset.fen = boardToFen(board) ?? "";
    for (const row of board.rows) {
      for (const cell of row) {
        const button = document.createElement("button");
        button.className = [
          "cell",
          cell.dark ? "dark" : "light",
          cell.highlighted ? "highlight" : "",
          this.selected === cell.square ? "selected" : "",
        ].join(" ");
        button.dataset.square = cell.square;
        button.textContent = cell.piece ? PIECE_GLYPHS[cell.piece] : "";
        button.addEventListener("click", () => this.onCellClick(cell.square, cell.piece));
        container.appendChild(button);
      }
    }
  }

  private onCellClick(square: string, piece: string | null): void {
    if (!this.client.canMoveNow()) {
      this.selected = null;
      return;
    }
    if (this.selected === null) {
      if (piece !== null) this.selected = square;
      return;
    }
    if (this.selected === square) {
      this.selected = null;
      return;
    }
    const from = this.selected;
    this.selected = null;
    let promotion: string | undefined;
    if (this.needsPromotion(from, square)) {
      promotion = (prompt("promote to (q/r/b/n)?", "q") ?? "q").toLowerCase();
    }
    this.client.submitHumanMove(from, square, promotion);
  }

  private needsPromotion(from: string, to: string): boolean {
    const state = this.client.state;
    if (state.parsed === null) return false;
    const file = from.charCodeAt(0) - 97;
    const rank = Number(from[1]) - 1;
    const piece = state.parsed.grid[rank][file];
    return (piece === "P" && to[1] === "8") || (piece === "p" && to[1] === "1");
  }
}
