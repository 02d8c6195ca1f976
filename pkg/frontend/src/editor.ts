/** Pure grid-editor state machine.
 *
 * The working grid always satisfies the grid invariants (dims 1..30,
 * symbols 0..9); every action except submission is reversible through a
 * bounded undo stack. Invalid actions leave the grid untouched and set a
 * visible message instead.
 */

import { GridRows, MAX_DIM, MIN_DIM, N_SYMBOLS } from "./types.js";

export const UNDO_LIMIT = 50; // comfortably above the guaranteed 20

export interface EditorState {
  grid: GridRows;
  selectedSymbol: number;
  cursor: { row: number; col: number };
  undoStack: GridRows[];
  message: string | null;
}

export type EditorAction =
  | { kind: "paint"; row: number; col: number }
  | { kind: "paintAtCursor" }
  | { kind: "floodFill"; row: number; col: number }
  | { kind: "resize"; height: number; width: number }
  | { kind: "copyFromInput"; input: GridRows }
  | { kind: "clear" }
  | { kind: "selectSymbol"; symbol: number }
  | { kind: "moveCursor"; dRow: number; dCol: number }
  | { kind: "undo" };

export function cloneGrid(g: GridRows): GridRows {
  return g.map((row) => row.slice());
}

export function gridsEqual(a: GridRows, b: GridRows): boolean {
  return (
    a.length === b.length &&
    a.every((row, r) => row.length === b[r].length && row.every((v, c) => v === b[r][c]))
  );
}

export function initialEditor(height = 3, width = 3): EditorState {
  return {
    grid: Array.from({ length: height }, () => Array(width).fill(0)),
    selectedSymbol: 0,
    cursor: { row: 0, col: 0 },
    undoStack: [],
    message: null,
  };
}

function inBounds(g: GridRows, row: number, col: number): boolean {
  return row >= 0 && row < g.length && col >= 0 && col < g[0].length;
}

function pushUndo(state: EditorState): GridRows[] {
  const stack = [...state.undoStack, cloneGrid(state.grid)];
  return stack.length > UNDO_LIMIT ? stack.slice(stack.length - UNDO_LIMIT) : stack;
}

function withGrid(state: EditorState, grid: GridRows): EditorState {
  return { ...state, grid, undoStack: pushUndo(state), message: null };
}

function clampCursor(state: EditorState): EditorState {
  const row = Math.min(state.cursor.row, state.grid.length - 1);
  const col = Math.min(state.cursor.col, state.grid[0].length - 1);
  return { ...state, cursor: { row: Math.max(0, row), col: Math.max(0, col) } };
}

export function reduce(state: EditorState, action: EditorAction): EditorState {
  switch (action.kind) {
    case "selectSymbol": {
      if (action.symbol < 0 || action.symbol >= N_SYMBOLS) {
        return { ...state, message: `symbol ${action.symbol} outside 0-9` };
      }
      return { ...state, selectedSymbol: action.symbol, message: null };
    }
    case "moveCursor": {
      const row = state.cursor.row + action.dRow;
      const col = state.cursor.col + action.dCol;
      if (!inBounds(state.grid, row, col)) return state;
      return { ...state, cursor: { row, col }, message: null };
    }
    case "paint": {
      if (!inBounds(state.grid, action.row, action.col)) return state;
      if (state.grid[action.row][action.col] === state.selectedSymbol) return state;
      const grid = cloneGrid(state.grid);
      grid[action.row][action.col] = state.selectedSymbol;
      return withGrid(state, grid);
    }
    case "paintAtCursor":
      return reduce(state, { kind: "paint", row: state.cursor.row, col: state.cursor.col });
    case "floodFill": {
      if (!inBounds(state.grid, action.row, action.col)) return state;
      const target = state.grid[action.row][action.col];
      if (target === state.selectedSymbol) return state;
      const grid = cloneGrid(state.grid);
      const queue: [number, number][] = [[action.row, action.col]];
      while (queue.length) {
        const [r, c] = queue.pop()!;
        if (!inBounds(grid, r, c) || grid[r][c] !== target) continue;
        grid[r][c] = state.selectedSymbol;
        queue.push([r - 1, c], [r + 1, c], [r, c - 1], [r, c + 1]);
      }
      return withGrid(state, grid);
    }
    case "resize": {
      const { height, width } = action;
      if (
        height < MIN_DIM || height > MAX_DIM || width < MIN_DIM || width > MAX_DIM ||
        !Number.isInteger(height) || !Number.isInteger(width)
      ) {
        return { ...state, message: `size must be between ${MIN_DIM} and ${MAX_DIM}` };
      }
      // Overlapping cells are preserved; new cells start at symbol 0.
      const grid = Array.from({ length: height }, (_, r) =>
        Array.from({ length: width }, (_, c) => (inBounds(state.grid, r, c) ? state.grid[r][c] : 0)),
      );
      return clampCursor(withGrid(state, grid));
    }
    case "copyFromInput": {
      if (!validGrid(action.input)) {
        return { ...state, message: "input grid is invalid" };
      }
      return clampCursor(withGrid(state, cloneGrid(action.input)));
    }
    case "clear": {
      const grid = state.grid.map((row) => row.map(() => 0));
      return withGrid(state, grid);
    }
    case "undo": {
      if (!state.undoStack.length) return { ...state, message: "nothing to undo" };
      const previous = state.undoStack[state.undoStack.length - 1];
      return {
        ...clampCursor({ ...state, grid: previous }),
        undoStack: state.undoStack.slice(0, -1),
        message: null,
      };
    }
  }
}

export function validGrid(g: GridRows): boolean {
  return (
    Array.isArray(g) &&
    g.length >= MIN_DIM &&
    g.length <= MAX_DIM &&
    Array.isArray(g[0]) &&
    g[0].length >= MIN_DIM &&
    g[0].length <= MAX_DIM &&
    g.every(
      (row) =>
        row.length === g[0].length &&
        row.every((v) => Number.isInteger(v) && v >= 0 && v < N_SYMBOLS),
    )
  );
}
