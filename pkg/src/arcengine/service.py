"""Human test session service: tasks out, attempts in, one bit back.

Protocol surface (JSON over HTTP/1.1):
    GET  /tasks                      -> id list with split labels
    GET  /tasks/{id}                 -> train pairs + test INPUTS only
    POST /sessions                   -> {"session_id": ...}
    POST /sessions/{sid}/tasks/{id}/attempts
         body {"test_index": i, "grid": rows}
         -> {"correct": bool, "trials_used": n, "trials_remaining": m}
    GET  /sessions/{sid}/summary     -> per-task solved flags + fraction

Status codes: 404 unknown task/session, 409 trial limit exceeded,
422 invalid grid. Test outputs are never serialized on any endpoint.

Attempts are appended (and fsynced) to one log per session before they
are acknowledged, so a crash never loses an acknowledged attempt and the
store rebuilds exactly by replaying the logs at startup.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import DimensionError, SymbolError
from .grid import grid_from_lists, grids_equal
from .taskio import Dataset, Task

MAX_TRIALS = 3


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


@dataclass
class _ExampleState:
    trials_used: int = 0
    solved: bool = False


@dataclass
class _SessionState:
    session_id: str
    examples: dict[tuple[str, int], _ExampleState] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def example(self, task_id: str, test_index: int) -> _ExampleState:
        return self.examples.setdefault((task_id, test_index), _ExampleState())


class SessionStore:
    """Session state over append-only logs; authoritative trial counting."""

    def __init__(self, dataset: Dataset, session_dir: str | Path):
        self.dataset = dataset
        self.tasks: dict[str, Task] = {t.id: t for t in dataset.tasks}
        self.session_dir = Path(session_dir)
        self.session_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, _SessionState] = {}
        self._global_lock = threading.Lock()
        self._replay_existing()

    # -- session lifecycle

    def create_session(self) -> str:
        sid = uuid.uuid4().hex
        with self._global_lock:
            self._sessions[sid] = _SessionState(sid)
        header = {"session_id": sid, "created": time.time(), "dataset": self.dataset.name}
        self._append(sid, header)
        return sid

    def _log_path(self, sid: str) -> Path:
        return self.session_dir / f"{sid}.log"

    def _append(self, sid: str, record: dict) -> None:
        line = json.dumps(record, separators=(",", ":"), sort_keys=True)
        with open(self._log_path(sid), "a", encoding="utf-8") as f:
            f.write(line + "\n")
            f.flush()
            os.fsync(f.fileno())

    def _replay_existing(self) -> None:
        for path in sorted(self.session_dir.glob("*.log")):
            sid = path.stem
            state = _SessionState(sid)
            for line in path.read_text().splitlines():
                if not line:
                    continue
                rec = json.loads(line)
                if "task_id" not in rec:
                    continue
                ex = state.example(rec["task_id"], rec["test_index"])
                if not ex.solved and ex.trials_used < MAX_TRIALS:
                    ex.trials_used += 1
                    if rec["correct"]:
                        ex.solved = True
            self._sessions[sid] = state

    # -- task views (test outputs never leave this module)

    def list_tasks(self) -> list[dict]:
        return [
            {"id": t.id, "split": self.dataset.split.value, "n_test": len(t.test)}
            for t in self.dataset.tasks
        ]

    def task_view(self, task_id: str) -> dict:
        task = self.tasks.get(task_id)
        if task is None:
            raise ServiceError(404, f"unknown task {task_id!r}")
        return {
            "id": task.id,
            "train": [
                {"input": p.input.tolists(), "output": p.output.tolists()}
                for p in task.train
            ],
            "test": [{"input": p.input.tolists()} for p in task.test],
        }

    # -- attempts

    def attempt(self, sid: str, task_id: str, test_index, grid_rows) -> dict:
        state = self._sessions.get(sid)
        if state is None:
            raise ServiceError(404, f"unknown session {sid!r}")
        task = self.tasks.get(task_id)
        if task is None:
            raise ServiceError(404, f"unknown task {task_id!r}")
        if not isinstance(test_index, int) or not 0 <= test_index < len(task.test):
            raise ServiceError(422, f"test_index {test_index!r} out of range")
        try:
            grid = grid_from_lists(grid_rows)
        except (DimensionError, SymbolError, TypeError) as e:
            raise ServiceError(422, f"invalid grid: {e}") from e

        with state.lock:
            ex = state.example(task_id, test_index)
            if ex.solved:
                raise ServiceError(409, "test example already solved")
            if ex.trials_used >= MAX_TRIALS:
                raise ServiceError(409, "trial limit exceeded")
            correct = grids_equal(grid, task.test[test_index].output)
            record = {
                "ts": time.time(),
                "task_id": task_id,
                "test_index": test_index,
                "grid": grid.tolists(),
                "correct": correct,
            }
            # Persist before acknowledging; a crash after this line never
            # loses the attempt.
            self._append(sid, record)
            ex.trials_used += 1
            if correct:
                ex.solved = True
            return {
                "correct": correct,
                "trials_used": ex.trials_used,
                "trials_remaining": 0 if correct else MAX_TRIALS - ex.trials_used,
            }

    def summary(self, sid: str) -> dict:
        state = self._sessions.get(sid)
        if state is None:
            raise ServiceError(404, f"unknown session {sid!r}")
        with state.lock:
            per_task: dict[str, dict] = {}
            solved_tasks = 0
            for task in self.dataset.tasks:
                examples = []
                any_attempt = False
                for i in range(len(task.test)):
                    ex = state.examples.get((task.id, i))
                    examples.append(
                        {
                            "test_index": i,
                            "trials_used": ex.trials_used if ex else 0,
                            "solved": ex.solved if ex else False,
                        }
                    )
                    if ex and ex.trials_used:
                        any_attempt = True
                solved = all(e["solved"] for e in examples)
                if solved:
                    solved_tasks += 1
                if any_attempt or solved:
                    per_task[task.id] = {"solved": solved, "examples": examples}
            return {
                "session_id": sid,
                "tasks": per_task,
                "solved_count": solved_tasks,
                "task_count": len(self.dataset.tasks),
                "fraction_solved": solved_tasks / len(self.dataset.tasks)
                if self.dataset.tasks
                else 0.0,
            }


# ---------------------------------------------------------------------------
# HTTP layer


def make_handler(store: SessionStore, static_dir: str | Path | None = None):
    static_root = Path(static_dir).resolve() if static_dir else None

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, status: int, doc: dict) -> None:
            body = json.dumps(doc).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            try:
                doc = json.loads(raw)
                if not isinstance(doc, dict):
                    raise ValueError("body must be a JSON object")
                return doc
            except ValueError as e:
                raise ServiceError(422, f"invalid body: {e}") from e

        def _serve_static(self, path: str) -> bool:
            if static_root is None:
                return False
            rel = path.lstrip("/") or "index.html"
            target = (static_root / rel).resolve()
            if not str(target).startswith(str(static_root)) or not target.is_file():
                return False
            ctype = {
                ".html": "text/html",
                ".js": "text/javascript",
                ".css": "text/css",
                ".map": "application/json",
                ".svg": "image/svg+xml",
            }.get(target.suffix, "application/octet-stream")
            body = target.read_bytes()
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
            return True

        def do_GET(self):
            try:
                parts = [p for p in self.path.split("?")[0].split("/") if p]
                if parts == ["tasks"]:
                    self._send_json(200, {"tasks": store.list_tasks()})
                elif len(parts) == 2 and parts[0] == "tasks":
                    self._send_json(200, store.task_view(parts[1]))
                elif len(parts) == 3 and parts[0] == "sessions" and parts[2] == "summary":
                    self._send_json(200, store.summary(parts[1]))
                elif self._serve_static(self.path):
                    return
                else:
                    self._send_json(404, {"error": "not found"})
            except ServiceError as e:
                self._send_json(e.status, {"error": e.message})

        def do_POST(self):
            try:
                parts = [p for p in self.path.split("?")[0].split("/") if p]
                if parts == ["sessions"]:
                    self._send_json(201, {"session_id": store.create_session()})
                elif (
                    len(parts) == 5
                    and parts[0] == "sessions"
                    and parts[2] == "tasks"
                    and parts[4] == "attempts"
                ):
                    body = self._read_body()
                    result = store.attempt(
                        parts[1], parts[3], body.get("test_index"), body.get("grid")
                    )
                    self._send_json(200, result)
                else:
                    self._send_json(404, {"error": "not found"})
            except ServiceError as e:
                self._send_json(e.status, {"error": e.message})

    return Handler


def serve(
    dataset: Dataset,
    session_dir: str | Path,
    host: str = "127.0.0.1",
    port: int = 8008,
    static_dir: str | Path | None = None,
) -> ThreadingHTTPServer:
    """Bind and return the server (caller runs serve_forever)."""
    store = SessionStore(dataset, session_dir)
    handler = make_handler(store, static_dir)
    server = ThreadingHTTPServer((host, port), handler)
    server.store = store  # handy for tests and shutdown hooks
    return server
