import json
import os
import signal
import socket
import subprocess
import sys
import threading
import time

import httpx
import pytest

from arcengine.mocks import build_mock_corpus, write_mock_corpus
from arcengine.service import SessionStore, ServiceError, serve
from arcengine.taskio import Dataset


@pytest.fixture()
def dataset():
    ds = build_mock_corpus()
    return Dataset("svc", ds.tasks[:4], ds.split)


@pytest.fixture()
def store(dataset, tmp_path):
    return SessionStore(dataset, tmp_path / "sessions")


def answer(dataset, task_id, test_index=0):
    return dataset.by_id(task_id).test[test_index].output.tolists()


class TestSessionStore:
    def test_task_views_never_contain_test_outputs(self, store, dataset):
        for t in dataset.tasks:
            view = store.task_view(t.id)
            assert all("output" not in item for item in view["test"])
            assert all("output" in item for item in view["train"])
            legitimate = {json.dumps(p.input.tolists()) for p in t.test}
            legitimate |= {json.dumps(p.input.tolists()) for p in t.train}
            legitimate |= {json.dumps(p.output.tolists()) for p in t.train}
            text = json.dumps(view)
            for pair in t.test:
                blob = json.dumps(pair.output.tolists())
                if blob not in legitimate:
                    assert blob not in text

    def test_unknown_task_404(self, store):
        with pytest.raises(ServiceError) as e:
            store.task_view("nope")
        assert e.value.status == 404

    def test_attempt_lifecycle(self, store, dataset):
        sid = store.create_session()
        tid = dataset.tasks[0].id
        wrong = [[9]]
        r1 = store.attempt(sid, tid, 0, wrong)
        assert r1 == {"correct": False, "trials_used": 1, "trials_remaining": 2}
        r2 = store.attempt(sid, tid, 0, answer(dataset, tid))
        assert r2["correct"] is True
        assert r2["trials_used"] == 2

    def test_fourth_attempt_rejected(self, store, dataset):
        sid = store.create_session()
        tid = dataset.tasks[0].id
        for _ in range(3):
            store.attempt(sid, tid, 0, [[9]])
        with pytest.raises(ServiceError) as e:
            store.attempt(sid, tid, 0, [[9]])
        assert e.value.status == 409

    def test_attempt_after_correct_rejected(self, store, dataset):
        sid = store.create_session()
        tid = dataset.tasks[0].id
        store.attempt(sid, tid, 0, answer(dataset, tid))
        with pytest.raises(ServiceError) as e:
            store.attempt(sid, tid, 0, answer(dataset, tid))
        assert e.value.status == 409

    def test_invalid_grid_422(self, store, dataset):
        sid = store.create_session()
        tid = dataset.tasks[0].id
        for bad in ([[10]], [[1], [2, 3]], [], "nope", [[1] * 31]):
            with pytest.raises(ServiceError) as e:
                store.attempt(sid, tid, 0, bad)
            assert e.value.status == 422

    def test_bad_test_index_422(self, store, dataset):
        sid = store.create_session()
        with pytest.raises(ServiceError) as e:
            store.attempt(sid, dataset.tasks[0].id, 99, [[1]])
        assert e.value.status == 422

    def test_unknown_session_404(self, store):
        with pytest.raises(ServiceError) as e:
            store.attempt("ghost", "x", 0, [[1]])
        assert e.value.status == 404

    def test_summary_counts(self, store, dataset):
        sid = store.create_session()
        t0, t1 = dataset.tasks[0].id, dataset.tasks[1].id
        store.attempt(sid, t0, 0, answer(dataset, t0))
        store.attempt(sid, t1, 0, [[9]])
        s = store.summary(sid)
        assert s["tasks"][t0]["solved"] is True
        assert s["tasks"][t1]["solved"] is False
        assert s["solved_count"] == 1
        assert s["fraction_solved"] == 1 / len(dataset.tasks)

    def test_restart_replays_acknowledged_attempts(self, dataset, tmp_path):
        sessions = tmp_path / "sessions"
        store1 = SessionStore(dataset, sessions)
        sid = store1.create_session()
        tid = dataset.tasks[0].id
        store1.attempt(sid, tid, 0, [[9]])
        store1.attempt(sid, tid, 0, answer(dataset, tid))
        # Simulate a crash: a brand-new store over the same directory.
        store2 = SessionStore(dataset, sessions)
        s = store2.summary(sid)
        assert s["tasks"][tid]["solved"] is True
        assert s["tasks"][tid]["examples"][0]["trials_used"] == 2
        with pytest.raises(ServiceError) as e:
            store2.attempt(sid, tid, 0, answer(dataset, tid))
        assert e.value.status == 409

    def test_concurrent_attempts_serialized(self, store, dataset):
        sid = store.create_session()
        tid = dataset.tasks[0].id
        outcomes = []

        def hammer():
            try:
                outcomes.append(store.attempt(sid, tid, 0, [[9]])["trials_used"])
            except ServiceError as e:
                outcomes.append(e.status)

        threads = [threading.Thread(target=hammer) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(o for o in outcomes if o in (1, 2, 3)) == [1, 2, 3]
        assert outcomes.count(409) == 5


@pytest.fixture()
def live_server(dataset, tmp_path):
    server = serve(dataset, tmp_path / "sessions", host="127.0.0.1", port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{server.server_address[1]}"
    yield base, dataset
    server.shutdown()
    server.server_close()


class TestHttpEndpoints:
    def test_list_tasks(self, live_server):
        base, dataset = live_server
        r = httpx.get(f"{base}/tasks")
        assert r.status_code == 200
        ids = [t["id"] for t in r.json()["tasks"]]
        assert ids == [t.id for t in dataset.tasks]

    def test_get_task_hides_outputs(self, live_server):
        base, dataset = live_server
        tid = dataset.tasks[0].id
        r = httpx.get(f"{base}/tasks/{tid}")
        assert r.status_code == 200
        doc = r.json()
        assert all(set(item) == {"input"} for item in doc["test"])

    def test_unknown_task_404(self, live_server):
        base, _ = live_server
        assert httpx.get(f"{base}/tasks/zzz").status_code == 404

    def test_attempt_flow_and_409(self, live_server):
        base, dataset = live_server
        tid = dataset.tasks[0].id
        sid = httpx.post(f"{base}/sessions").json()["session_id"]
        for i in range(3):
            r = httpx.post(
                f"{base}/sessions/{sid}/tasks/{tid}/attempts",
                json={"test_index": 0, "grid": [[9]]},
            )
            assert r.status_code == 200
            doc = r.json()
            assert set(doc) == {"correct", "trials_used", "trials_remaining"}
            assert doc["correct"] is False
            assert doc["trials_used"] == i + 1
        r = httpx.post(
            f"{base}/sessions/{sid}/tasks/{tid}/attempts",
            json={"test_index": 0, "grid": [[9]]},
        )
        assert r.status_code == 409

    def test_invalid_grid_422(self, live_server):
        base, dataset = live_server
        tid = dataset.tasks[0].id
        sid = httpx.post(f"{base}/sessions").json()["session_id"]
        r = httpx.post(
            f"{base}/sessions/{sid}/tasks/{tid}/attempts",
            json={"test_index": 0, "grid": [[77]]},
        )
        assert r.status_code == 422

    def test_summary_roundtrip(self, live_server):
        base, dataset = live_server
        tid = dataset.tasks[1].id
        sid = httpx.post(f"{base}/sessions").json()["session_id"]
        grid = dataset.by_id(tid).test[0].output.tolists()
        httpx.post(
            f"{base}/sessions/{sid}/tasks/{tid}/attempts",
            json={"test_index": 0, "grid": grid},
        )
        s = httpx.get(f"{base}/sessions/{sid}/summary").json()
        assert s["tasks"][tid]["solved"] is True


class TestKillAndRestart:
    def test_sigkill_preserves_acknowledged_attempts(self, tmp_path):
        corpus = tmp_path / "tasks"
        write_mock_corpus(corpus)
        sessions = tmp_path / "sessions"
        with socket.socket() as s:
            s.bind(("127.0.0.1", 0))
            port = s.getsockname()[1]

        def spawn():
            return subprocess.Popen(
                [
                    sys.executable,
                    "-m",
                    "arcengine.cli",
                    "serve",
                    str(corpus),
                    "--bind",
                    f"127.0.0.1:{port}",
                    "--sessions",
                    str(sessions),
                ],
                stdout=subprocess.PIPE,
                stderr=subprocess.STDOUT,
            )

        def wait_up():
            for _ in range(100):
                try:
                    httpx.get(f"http://127.0.0.1:{port}/tasks", timeout=1)
                    return
                except httpx.HTTPError:
                    time.sleep(0.1)
            raise RuntimeError("server did not come up")

        proc = spawn()
        try:
            wait_up()
            base = f"http://127.0.0.1:{port}"
            sid = httpx.post(f"{base}/sessions").json()["session_id"]
            r = httpx.post(
                f"{base}/sessions/{sid}/tasks/mock01_identity/attempts",
                json={"test_index": 0, "grid": [[9]]},
            )
            assert r.status_code == 200 and r.json()["trials_used"] == 1
        finally:
            os.kill(proc.pid, signal.SIGKILL)
            proc.wait(timeout=10)

        proc = spawn()
        try:
            wait_up()
            base = f"http://127.0.0.1:{port}"
            s = httpx.get(f"{base}/sessions/{sid}/summary").json()
            assert s["tasks"]["mock01_identity"]["examples"][0]["trials_used"] == 1
            r = httpx.post(
                f"{base}/sessions/{sid}/tasks/mock01_identity/attempts",
                json={"test_index": 0, "grid": [[8]]},
            )
            assert r.json()["trials_used"] == 2
        finally:
            proc.terminate()
            proc.wait(timeout=10)
