/** DOM rendering: task panels, the editable grid, palette, status. */

import type { EditorState } from "./editor.js";
import type { GridRows, TaskView } from "./types.js";
import { MAX_TRIALS } from "./types.js";

// The de-facto public palette for symbols 0-9; numerals are overlaid so
// color perception is never required.
export const PALETTE = [
  "#000000", // 0 black
  "#0074D9", // 1 blue
  "#FF4136", // 2 red
  "#2ECC40", // 3 green
  "#FFDC00", // 4 yellow
  "#AAAAAA", // 5 grey
  "#F012BE", // 6 magenta
  "#FF851B", // 7 orange
  "#7FDBFF", // 8 cyan
  "#870C25", // 9 maroon
];

export function gridElement(grid: GridRows, opts: {
  cellPx?: number;
  onCell?: (row: number, col: number, event: MouseEvent) => void;
  cursor?: { row: number; col: number } | null;
} = {}): HTMLElement {
  const el = document.createElement("div");
  el.className = "grid";
  const cell = opts.cellPx ?? Math.max(8, Math.floor(240 / Math.max(grid.length, grid[0].length)));
  el.style.gridTemplateColumns = `repeat(${grid[0].length}, ${cell}px)`;
  grid.forEach((row, r) => {
    row.forEach((value, c) => {
      const d = document.createElement("div");
      d.className = "cell";
      d.style.width = d.style.height = `${cell}px`;
      d.style.lineHeight = `${cell}px`;
      d.style.background = PALETTE[value];
      d.style.color = value === 0 ? "#555" : "#00000090";
      if (cell >= 14) d.textContent = String(value);
      if (opts.cursor && opts.cursor.row === r && opts.cursor.col === c) {
        d.classList.add("cursor");
      }
      if (opts.onCell) {
        d.addEventListener("mousedown", (ev) => opts.onCell!(r, c, ev));
      }
      el.appendChild(d);
    });
  });
  return el;
}

export function renderTaskPanels(root: HTMLElement, task: TaskView, activeTest: number): void {
  root.textContent = "";
  const demos = document.createElement("div");
  demos.className = "panels";
  task.train.forEach((pair, i) => {
    const panel = document.createElement("div");
    panel.className = "panel";
    panel.appendChild(caption(`demonstration ${i + 1}`));
    const row = document.createElement("div");
    row.className = "pair";
    row.appendChild(gridElement(pair.input));
    row.appendChild(arrow());
    row.appendChild(gridElement(pair.output));
    panel.appendChild(row);
    demos.appendChild(panel);
  });
  root.appendChild(demos);

  const test = document.createElement("div");
  test.className = "panel test-panel";
  test.appendChild(caption(`test input ${activeTest + 1} of ${task.test.length}`));
  test.appendChild(gridElement(task.test[activeTest].input));
  root.appendChild(test);
}

export function renderEditor(
  root: HTMLElement,
  state: EditorState,
  onCell: (row: number, col: number, event: MouseEvent) => void,
): void {
  root.textContent = "";
  root.appendChild(
    gridElement(state.grid, { cellPx: 22, onCell, cursor: state.cursor }),
  );
}

export function renderPalette(
  root: HTMLElement,
  selected: number,
  onSelect: (symbol: number) => void,
): void {
  root.textContent = "";
  PALETTE.forEach((color, symbol) => {
    const b = document.createElement("button");
    b.className = "swatch" + (symbol === selected ? " selected" : "");
    b.style.background = color;
    b.textContent = String(symbol);
    b.title = `symbol ${symbol} (press ${symbol})`;
    b.addEventListener("click", () => onSelect(symbol));
    root.appendChild(b);
  });
}

export function renderStatus(
  root: HTMLElement,
  text: string,
  kind: "info" | "success" | "failure" = "info",
): void {
  root.textContent = text;
  root.className = `status ${kind}`;
}

export function trialsLine(used: number): string {
  return `trials: ${used}/${MAX_TRIALS}`;
}

function caption(text: string): HTMLElement {
  const el = document.createElement("div");
  el.className = "caption";
  el.textContent = text;
  return el;
}

function arrow(): HTMLElement {
  const el = document.createElement("div");
  el.className = "arrow";
  el.textContent = "->";
  return el;
}
