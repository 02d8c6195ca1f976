/**
 * Scripted end-to-end session against the real backend.
 *
 * Spawns the Python session service over the mock corpus, then drives the
 * actual client modules (Api + SessionFlow + editor reducer) through a
 * human-like session while capturing every HTTP response. Asserts the
 * trial protocol (409 on the 4th attempt, success within 3 trials), that
 * no payload ever contains a test output grid, and that replaying the
 * server's append-only session log reproduces the summary's solved flags.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Api, recordingFetch } from "../src/api.js";
import { initialEditor, reduce } from "../src/editor.js";
import { SessionFlow } from "../src/session.js";
import { MAX_TRIALS, type GridRows } from "../src/types.js";

const PYTHON = process.env.ARC_PYTHON ?? "python3";
const PORT = 18750 + (process.pid % 1000);
const BASE = `http://127.0.0.1:${PORT}`;

let proc: ChildProcess;
let workDir: string;
let sessionsDir: string;

const traffic: { url: string; status: number; body: string }[] = [];
const api = new Api(BASE, recordingFetch((u, i) => fetch(u, i), traffic));
const flow = new SessionFlow(api);

function flipH(rows: GridRows): GridRows {
  return rows.map((row) => [...row].reverse());
}

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const r = await fetch(`${BASE}/tasks`);
      if (r.ok) return;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 100));
    }
  }
  throw new Error("backend did not come up");
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "arc-ui-e2e-"));
  const corpus = join(workDir, "tasks");
  sessionsDir = join(workDir, "sessions");
  const wrote = spawnSync(
    PYTHON,
    ["-c", `from arcengine.mocks import write_mock_corpus; write_mock_corpus(r"${corpus}")`],
    { stdio: "inherit" },
  );
  if (wrote.status !== 0) throw new Error("could not materialize the mock corpus");
  proc = spawn(
    PYTHON,
    [
      "-m",
      "arcengine.cli",
      "serve",
      corpus,
      "--bind",
      `127.0.0.1:${PORT}`,
      "--sessions",
      sessionsDir,
    ],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 30_000);

afterAll(() => {
  proc?.kill();
});

describe("scripted human session (end to end)", () => {
  it("runs the full trial protocol against the live service", async () => {
    await flow.start();
    expect(flow.sessionId).toBeTruthy();
    expect(flow.taskIds.length).toBeGreaterThanOrEqual(20);

    // --- Task A: exhaust the three trials with edited wrong answers.
    const hard = await flow.loadTask("mock02_recolor");
    expect(hard.test[0]).not.toHaveProperty("output");

    let editor = initialEditor(2, 2);
    editor = reduce(editor, { kind: "copyFromInput", input: hard.test[0].input });
    editor = reduce(editor, { kind: "resize", height: 3, width: 3 });
    expect(editor.grid.length).toBe(3);
    editor = reduce(editor, { kind: "selectSymbol", symbol: 9 });
    editor = reduce(editor, { kind: "paint", row: 2, col: 2 });
    expect(editor.grid[2][2]).toBe(9);

    for (let trial = 1; trial <= MAX_TRIALS; trial++) {
      editor = reduce(editor, { kind: "paint", row: 0, col: trial - 1 });
      const outcome = await flow.submit("mock02_recolor", 0, editor.grid);
      expect(outcome.kind).toBe("accepted");
      if (outcome.kind === "accepted") {
        expect(outcome.result.correct).toBe(false);
        expect(outcome.result.trials_used).toBe(trial);
      }
    }
    expect(flow.example("mock02_recolor", 0).status).toBe("exhausted");

    // The fourth attempt must be refused with status 409.
    const fourth = await flow.submit("mock02_recolor", 0, editor.grid);
    expect(fourth).toMatchObject({ kind: "rejected", status: 409 });

    // --- Task B: solve within the three trials (flip task, solved by eye).
    const easy = await flow.loadTask("mock03_flip_h");
    let answer = initialEditor(1, 1);
    answer = reduce(answer, { kind: "copyFromInput", input: easy.test[0].input });
    // First trial: deliberately wrong (unmodified input).
    const wrong = await flow.submit("mock03_flip_h", 0, answer.grid);
    expect(wrong.kind === "accepted" && wrong.result.correct).toBe(false);
    // Second trial: the mirrored grid.
    answer = reduce(answer, { kind: "copyFromInput", input: flipH(easy.test[0].input) });
    const right = await flow.submit("mock03_flip_h", 0, answer.grid);
    expect(right.kind === "accepted" && right.result.correct).toBe(true);
    if (right.kind === "accepted") {
      expect(right.result.trials_used).toBeLessThanOrEqual(MAX_TRIALS);
    }

    // --- Summary agrees with local bookkeeping after a re-sync.
    const summary = await flow.resync();
    expect(summary.tasks["mock02_recolor"].solved).toBe(false);
    expect(summary.tasks["mock03_flip_h"].solved).toBe(true);

    // --- Traffic capture: no response payload ever contains a test output.
    const outputs: string[] = [];
    for (const id of ["mock02_recolor", "mock03_flip_h"]) {
      const expected = id === "mock02_recolor" ? [[2, 3], [0, 2]] : flipH(easy.test[0].input);
      outputs.push(JSON.stringify(expected));
    }
    // Sanity: the capture saw real traffic, including the task payloads.
    expect(traffic.length).toBeGreaterThan(8);
    for (const entry of traffic) {
      const compact = entry.body.replace(/\s+/g, "");
      for (const blob of outputs) {
        expect(compact.includes(blob.replace(/\s+/g, ""))).toBe(false);
      }
    }

    // --- The append-only log replays to the same per-task solved flags.
    const logPath = join(sessionsDir, `${flow.sessionId}.log`);
    const lines = readFileSync(logPath, "utf-8").trim().split("\n").map((l) => JSON.parse(l));
    const attempts = lines.filter((l) => "task_id" in l);
    const replay = new Map<string, { trials: number; solved: boolean }>();
    for (const a of attempts) {
      const key = `${a.task_id}:${a.test_index}`;
      const st = replay.get(key) ?? { trials: 0, solved: false };
      if (!st.solved && st.trials < MAX_TRIALS) {
        st.trials += 1;
        if (a.correct) st.solved = true;
      }
      replay.set(key, st);
    }
    for (const [taskId, entry] of Object.entries(summary.tasks)) {
      const solvedFromLog = entry.examples.every(
        (ex) => replay.get(`${taskId}:${ex.test_index}`)?.solved ?? false,
      );
      expect(solvedFromLog).toBe(entry.solved);
    }
    expect(replay.get("mock02_recolor:0")).toEqual({ trials: 3, solved: false });
    expect(replay.get("mock03_flip_h:0")).toEqual({ trials: 2, solved: true });
  }, 30_000);
});
