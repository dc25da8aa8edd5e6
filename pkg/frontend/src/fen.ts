// FEN handling for the renderer: parsing, byte-exact re-serialization, and
// the syntax validation the halt-correction dialog runs before sending.

export const FILES = "abcdefgh";
const PIECE_LETTERS = new Set("pnbrqkPNBRQK".split(""));

export interface ParsedFen {
  /** grid[rank][file]; rank 0 is rank 1, entries are FEN letters or null */
  grid: (string | null)[][];
  sideToMove: string;
  castling: string;
  enPassant: string;
  halfmove: string;
  fullmove: string;
}

export function squareName(file: number, rank: number): string {
  return FILES[file] + String(rank + 1);
}

export function parseBoardField(field: string): (string | null)[][] | null {
  const rows = field.split("/");
  if (rows.length !== 8) return null;
  const grid: (string | null)[][] = [];
  for (let i = 0; i < 8; i++) {
    const row = rows[i];
    const cells: (string | null)[] = [];
    for (const ch of row) {
      if (ch >= "1" && ch <= "8") {
        for (let k = 0; k < Number(ch); k++) cells.push(null);
      } else if (PIECE_LETTERS.has(ch)) {
        cells.push(ch);
      } else {
        return null;
      }
    }
    if (cells.length !== 8) return null;
    grid[7 - i] = cells;
  }
  return grid;
}

export function parseFen(fen: string): ParsedFen | null {
  const fields = fen.trim().split(/\s+/);
  if (fields.length !== 6) return null;
  const grid = parseBoardField(fields[0]);
  if (grid === null) return null;
  if (fields[1] !== "w" && fields[1] !== "b") return null;
  if (!/^(-|K?Q?k?q?)$/.test(fields[2]) || fields[2] === "") return null;
  if (!/^(-|[a-h][36])$/.test(fields[3])) return null;
  if (!/^\d+$/.test(fields[4]) || !/^\d+$/.test(fields[5])) return null;
  return {
    grid,
    sideToMove: fields[1],
    castling: fields[2],
    enPassant: fields[3],
    halfmove: fields[4],
    fullmove: fields[5],
  };
}

export function isValidFenSyntax(fen: string): boolean {
  return parseFen(fen) !== null;
}

export function boardFieldOf(grid: (string | null)[][]): string {
  const rows: string[] = [];
  for (let rank = 7; rank >= 0; rank--) {
    let row = "";
    let run = 0;
    for (let file = 0; file < 8; file++) {
      const piece = grid[rank][file];
      if (piece === null) {
        run += 1;
      } else {
        if (run > 0) {
          row += String(run);
          run = 0;
        }
        row += piece;
      }
    }
    if (run > 0) row += String(run);
    rows.push(row);
  }
  return rows.join("/");
}

export function serializeFen(parsed: ParsedFen): string {
  return [
    boardFieldOf(parsed.grid),
    parsed.sideToMove,
    parsed.castling,
    parsed.enPassant,
    parsed.halfmove,
    parsed.fullmove,
  ].join(" ");
}

/** Square names whose content differs between two positions. */
export function diffSquares(before: ParsedFen, after: ParsedFen): string[] {
  const changed: string[] = [];
  for (let rank = 0; rank < 8; rank++) {
    for (let file = 0; file < 8; file++) {
      if (before.grid[rank][file] !== after.grid[rank][file]) {
        changed.push(squareName(file, rank));
      }
    }
  }
  return changed;
}
