/** Session flow: task progression, trial bookkeeping, submissions.
 *
 * The server is authoritative for trial counts; the local counters are
 * advisory and re-synced from /summary (e.g. after a reload). A network
 * failure never counts an attempt locally and keeps the working grid so
 * the submission can be retried.
 */

import { Api, ApiError, NetworkFailure } from "./api.js";
import type { AttemptResult, GridRows, SessionSummary, TaskView } from "./types.js";
import { MAX_TRIALS } from "./types.js";

export type ExampleStatus = "open" | "solved" | "exhausted";

export interface ExampleProgress {
  trialsUsed: number;
  status: ExampleStatus;
}

export type SubmitOutcome =
  | { kind: "accepted"; result: AttemptResult }
  | { kind: "rejected"; status: number; message: string }
  | { kind: "network_failure"; message: string };

export class SessionFlow {
  sessionId: string | null = null;
  taskIds: string[] = [];
  progress = new Map<string, ExampleProgress>(); // `${taskId}:${testIndex}`

  constructor(private api: Api) {}

  private key(taskId: string, testIndex: number): string {
    return `${taskId}:${testIndex}`;
  }

  example(taskId: string, testIndex: number): ExampleProgress {
    return this.progress.get(this.key(taskId, testIndex)) ?? { trialsUsed: 0, status: "open" };
  }

  async start(): Promise<void> {
    this.sessionId = await this.api.createSession();
    const listing = await this.api.listTasks();
    this.taskIds = listing.tasks.map((t) => t.id);
  }

  loadTask(taskId: string): Promise<TaskView> {
    return this.api.getTask(taskId);
  }

  async submit(taskId: string, testIndex: number, grid: GridRows): Promise<SubmitOutcome> {
    if (!this.sessionId) throw new Error("session not started");
    const k = this.key(taskId, testIndex);
    try {
      const result = await this.api.submitAttempt(this.sessionId, taskId, testIndex, grid);
      // Count only server-acknowledged attempts.
      this.progress.set(k, {
        trialsUsed: result.trials_used,
        status: result.correct
          ? "solved"
          : result.trials_remaining === 0
            ? "exhausted"
            : "open",
      });
      return { kind: "accepted", result };
    } catch (e) {
      if (e instanceof NetworkFailure) {
        return { kind: "network_failure", message: e.message };
      }
      if (e instanceof ApiError) {
        if (e.status === 409) {
          const current = this.example(taskId, testIndex);
          this.progress.set(k, {
            trialsUsed: Math.max(current.trialsUsed, MAX_TRIALS),
            status: current.status === "solved" ? "solved" : "exhausted",
          });
        }
        return { kind: "rejected", status: e.status, message: e.message };
      }
      throw e;
    }
  }

  /** Re-sync advisory counters from the authoritative summary. */
  async resync(): Promise<SessionSummary> {
    if (!this.sessionId) throw new Error("session not started");
    const summary = await this.api.getSummary(this.sessionId);
    this.progress.clear();
    for (const [taskId, entry] of Object.entries(summary.tasks)) {
      for (const ex of entry.examples) {
        let status: ExampleStatus = "open";
        if (ex.solved) status = "solved";
        else if (ex.trials_used >= MAX_TRIALS) status = "exhausted";
        this.progress.set(this.key(taskId, ex.test_index), {
          trialsUsed: ex.trials_used,
          status,
        });
      }
    }
    return summary;
  }

  /** The next test example still open for a task, or null when done. */
  nextOpenExample(task: TaskView): number | null {
    for (let i = 0; i < task.test.length; i++) {
      if (this.example(task.id, i).status === "open") return i;
    }
    return null;
  }

  /** The next task with any open example after the given one. */
  nextTaskAfter(taskId: string): string | null {
    const start = this.taskIds.indexOf(taskId);
    for (let step = 1; step <= this.taskIds.length; step++) {
      const candidate = this.taskIds[(start + step) % this.taskIds.length];
      if (candidate !== taskId) return candidate;
    }
    return null;
  }
}
