/** Thin client over the session endpoints; fetch is injectable so tests
 * can mock it and the e2e harness can capture traffic. */

import type {
  AttemptResult,
  GridRows,
  SessionSummary,
  TaskSummary,
  TaskView,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export class NetworkFailure extends Error {}

async function decode<T>(resp: Response): Promise<T> {
  const body = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    throw new ApiError(resp.status, (body as { error?: string }).error ?? resp.statusText);
  }
  return body as T;
}

export class Api {
  constructor(
    private base: string,
    private fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchImpl(`${this.base}${path}`, init);
    } catch (e) {
      throw new NetworkFailure(String(e));
    }
    return decode<T>(resp);
  }

  listTasks(): Promise<{ tasks: TaskSummary[] }> {
    return this.request("/tasks");
  }

  getTask(id: string): Promise<TaskView> {
    return this.request(`/tasks/${encodeURIComponent(id)}`);
  }

  async createSession(): Promise<string> {
    const doc = await this.request<{ session_id: string }>("/sessions", { method: "POST" });
    return doc.session_id;
  }

  submitAttempt(
    sessionId: string,
    taskId: string,
    testIndex: number,
    grid: GridRows,
  ): Promise<AttemptResult> {
    return this.request(
      `/sessions/${encodeURIComponent(sessionId)}/tasks/${encodeURIComponent(taskId)}/attempts`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ test_index: testIndex, grid }),
      },
    );
  }

  getSummary(sessionId: string): Promise<SessionSummary> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/summary`);
  }
}

/** Wrap a fetch so every response body is recorded (traffic capture). */
export function recordingFetch(
  inner: FetchLike,
  log: { url: string; status: number; body: string }[],
): FetchLike {
  return async (url, init) => {
    const resp = await inner(url, init);
    const copy = resp.clone();
    log.push({ url, status: resp.status, body: await copy.text() });
    return resp;
  };
}
