// The rendered-board model the DOM layer paints.  Rendering is pure; the
// model re-serializes to the exact FEN it was built from, which is the
// mirror-fidelity contract the tests pin.

import { ParsedFen, boardFieldOf, squareName } from "./fen.js";
import { ConsoleState } from "./state.js";

export interface RenderedCell {
  square: string;
  piece: string | null; // FEN letter
  dark: boolean;
  highlighted: boolean;
}

export interface RenderedBoard {
  /** rows in display order, rank 8 first; null when falling back to text */
  rows: RenderedCell[][] | null;
  /** raw FEN text shown when the position cannot be parsed */
  fallback: string | null;
  sideToMove: string | null;
  poseState: string;
  meta: ParsedFen | null;
}

export function renderBoard(state: ConsoleState): RenderedBoard {
  if (state.parsed === null) {
    return {
      rows: null,
      fallback: state.fen,
      sideToMove: null,
      poseState: state.poseState,
      meta: null,
    };
  }
  const highlight = new Set(state.lastChanged);
  const rows: RenderedCell[][] = [];
  for (let rank = 7; rank >= 0; rank--) {
    const row: RenderedCell[] = [];
    for (let file = 0; file < 8; file++) {
      const name = squareName(file, rank);
      row.push({
        square: name,
        piece: state.parsed.grid[rank][file],
        dark: (file + rank) % 2 === 0,
        highlighted: highlight.has(name),
      });
    }
    rows.push(row);
  }
  return {
    rows,
    fallback: null,
    sideToMove: state.parsed.sideToMove,
    poseState: state.poseState,
    meta: state.parsed,
  };
}

/** Re-serialize the rendered board back into its full FEN string. */
export function boardToFen(board: RenderedBoard): string | null {
  if (board.rows === null || board.meta === null) {
    return board.fallback;
  }
  const grid: (string | null)[][] = [];
  for (let rank = 0; rank < 8; rank++) grid.push(new Array(8).fill(null));
  for (const row of board.rows) {
    for (const cell of row) {
      const file = cell.square.charCodeAt(0) - "a".charCodeAt(0);
      const rank = Number(cell.square[1]) - 1;
      grid[rank][file] = cell.piece;
    }
  }
  return [
    boardFieldOf(grid),
    board.meta.sideToMove,
    board.meta.castling,
    board.meta.enPassant,
    board.meta.halfmove,
    board.meta.fullmove,
  ].join(" ");
}
