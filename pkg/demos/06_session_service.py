"""A scripted human test session against the HTTP service.

Starts the server on an ephemeral port, walks the protocol endpoints,
and shows the trial bookkeeping (3 trials, binary feedback only).

Run: python demos/06_session_service.py
"""

import tempfile
import threading

import httpx

from arcengine.mocks import build_mock_corpus
from arcengine.service import serve
from arcengine.taskio import Dataset

corpus = build_mock_corpus()
dataset = Dataset("demo", corpus.tasks[:3], corpus.split)

with tempfile.TemporaryDirectory() as sessions:
    server = serve(dataset, sessions, port=0)
    threading.Thread(target=server.serve_forever, daemon=True).start()
    base = f"http://127.0.0.1:{server.server_address[1]}"
    print("serving on", base)

    tasks = httpx.get(f"{base}/tasks").json()["tasks"]
    print("tasks:", [t["id"] for t in tasks])

    tid = tasks[0]["id"]
    view = httpx.get(f"{base}/tasks/{tid}").json()
    print(f"{tid}: {len(view['train'])} demonstrations, "
          f"{len(view['test'])} test inputs (outputs never transmitted)")

    sid = httpx.post(f"{base}/sessions").json()["session_id"]
    print("session:", sid)

    def attempt(grid):
        r = httpx.post(
            f"{base}/sessions/{sid}/tasks/{tid}/attempts",
            json={"test_index": 0, "grid": grid},
        )
        print(f"  -> {r.status_code} {r.json()}")
        return r

    print("two wrong answers, then the correct one:")
    attempt([[9]])
    attempt([[8]])
    correct = dataset.by_id(tid).test[0].output.tolists()  # server-side only
    attempt(correct)
    print("a further attempt is refused (already solved):")
    attempt(correct)

    summary = httpx.get(f"{base}/sessions/{sid}/summary").json()
    print("summary:", {k: v["solved"] for k, v in summary["tasks"].items()},
          f"fraction {summary['fraction_solved']:.3f}")

    server.shutdown()
