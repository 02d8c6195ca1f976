/** Browser entry point: wires the session flow, editor, and rendering. */

import { Api } from "./api.js";
import { EditorState, initialEditor, reduce } from "./editor.js";
import { renderEditor, renderPalette, renderStatus, renderTaskPanels, trialsLine } from "./render.js";
import { SessionFlow } from "./session.js";
import type { TaskView } from "./types.js";

const api = new Api("");
const flow = new SessionFlow(api);

let editor: EditorState = initialEditor();
let task: TaskView | null = null;
let activeTest = 0;

const el = {
  tasks: byId("tasks"),
  panels: byId("panels"),
  editor: byId("editor"),
  palette: byId("palette"),
  status: byId("status"),
  trials: byId("trials"),
  height: byId("height") as HTMLInputElement,
  width: byId("width") as HTMLInputElement,
};

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function dispatch(action: Parameters<typeof reduce>[1]): void {
  editor = reduce(editor, action);
  draw();
}

function draw(): void {
  if (task) {
    renderTaskPanels(el.panels, task, activeTest);
    el.trials.textContent = trialsLine(flow.example(task.id, activeTest).trialsUsed);
  }
  renderEditor(el.editor, editor, (row, col, ev) => {
    dispatch(ev.shiftKey ? { kind: "floodFill", row, col } : { kind: "paint", row, col });
  });
  renderPalette(el.palette, editor.selectedSymbol, (symbol) =>
    dispatch({ kind: "selectSymbol", symbol }),
  );
  if (editor.message) renderStatus(el.status, editor.message, "failure");
}

function renderTaskList(): void {
  el.tasks.textContent = "";
  flow.taskIds.forEach((id) => {
    const b = document.createElement("button");
    b.textContent = id;
    b.addEventListener("click", () => void openTask(id));
    el.tasks.appendChild(b);
  });
}

async function openTask(id: string): Promise<void> {
  try {
    task = await flow.loadTask(id);
  } catch (e) {
    renderStatus(el.status, `failed to load ${id}: ${e}`, "failure");
    return;
  }
  activeTest = flow.nextOpenExample(task) ?? 0;
  editor = initialEditor(
    task.test[activeTest].input.length,
    task.test[activeTest].input[0].length,
  );
  renderStatus(el.status, `task ${id}: build the output for the test input`, "info");
  draw();
}

async function submit(): Promise<void> {
  if (!task) return;
  const status = flow.example(task.id, activeTest).status;
  if (status !== "open") {
    renderStatus(el.status, "no trials remaining for this example", "failure");
    return;
  }
  const outcome = await flow.submit(task.id, activeTest, editor.grid);
  if (outcome.kind === "network_failure") {
    // The attempt was not acknowledged; the grid stays, retry is safe.
    renderStatus(el.status, `network failure, attempt not counted: ${outcome.message}`, "failure");
    return;
  }
  if (outcome.kind === "rejected") {
    renderStatus(el.status, `rejected (${outcome.status}): ${outcome.message}`, "failure");
    draw();
    return;
  }
  const r = outcome.result;
  if (r.correct) {
    renderStatus(el.status, "correct", "success");
    const next = flow.nextOpenExample(task);
    if (next !== null) {
      activeTest = next;
      editor = initialEditor(
        task.test[activeTest].input.length,
        task.test[activeTest].input[0].length,
      );
    } else {
      const nextTask = flow.nextTaskAfter(task.id);
      if (nextTask) await openTask(nextTask);
    }
  } else {
    renderStatus(
      el.status,
      `incorrect, ${r.trials_remaining} trial${r.trials_remaining === 1 ? "" : "s"} left`,
      "failure",
    );
  }
  draw();
}

function bindControls(): void {
  byId("copy").addEventListener("click", () => {
    if (task) dispatch({ kind: "copyFromInput", input: task.test[activeTest].input });
  });
  byId("clear").addEventListener("click", () => dispatch({ kind: "clear" }));
  byId("undo").addEventListener("click", () => dispatch({ kind: "undo" }));
  byId("resize").addEventListener("click", () =>
    dispatch({
      kind: "resize",
      height: Number(el.height.value),
      width: Number(el.width.value),
    }),
  );
  byId("submit").addEventListener("click", () => void submit());
  byId("resync").addEventListener("click", () => void flow.resync().then(draw));

  // Keyboard-first editing: digits pick a symbol, arrows move, space paints.
  document.addEventListener("keydown", (ev) => {
    if ((ev.target as HTMLElement).tagName === "INPUT") return;
    if (/^[0-9]$/.test(ev.key)) dispatch({ kind: "selectSymbol", symbol: Number(ev.key) });
    else if (ev.key === "ArrowUp") dispatch({ kind: "moveCursor", dRow: -1, dCol: 0 });
    else if (ev.key === "ArrowDown") dispatch({ kind: "moveCursor", dRow: 1, dCol: 0 });
    else if (ev.key === "ArrowLeft") dispatch({ kind: "moveCursor", dRow: 0, dCol: -1 });
    else if (ev.key === "ArrowRight") dispatch({ kind: "moveCursor", dRow: 0, dCol: 1 });
    else if (ev.key === " " || ev.key === "Enter") dispatch({ kind: "paintAtCursor" });
    else if (ev.key === "u") dispatch({ kind: "undo" });
    else return;
    ev.preventDefault();
  });
}

async function boot(): Promise<void> {
  bindControls();
  renderStatus(el.status, "starting session...", "info");
  await flow.start();
  renderTaskList();
  if (flow.taskIds.length) await openTask(flow.taskIds[0]);
}

void boot();
