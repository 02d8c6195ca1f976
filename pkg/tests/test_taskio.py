import json
import random

import pytest

from arcengine.errors import (
    DimensionError,
    EmptyDatasetError,
    FormatError,
    IoError,
    SymbolError,
)
from arcengine.grid import grid_from_lists
from arcengine.taskio import (
    Dataset,
    ExamplePair,
    Split,
    Task,
    compute_stats,
    format_load_report,
    load_dataset,
    parse_task,
    serialize_task,
)

MINIMAL = '{"train":[{"input":[[0]],"output":[[0]]}],"test":[{"input":[[1]],"output":[[2]]}]}'


def random_task(rng, task_id):
    def rgrid():
        h, w = rng.randint(1, 6), rng.randint(1, 6)
        return grid_from_lists([[rng.randrange(10) for _ in range(w)] for _ in range(h)])

    train = tuple(ExamplePair(rgrid(), rgrid()) for _ in range(rng.randint(1, 5)))
    test = tuple(ExamplePair(rgrid(), rgrid()) for _ in range(rng.randint(1, 3)))
    return Task(id=task_id, train=train, test=test)


class TestParse:
    def test_minimal_task(self):
        t = parse_task(MINIMAL, "t0")
        assert len(t.train) == 1 and len(t.test) == 1
        assert t.train[0].input.cells == (0,)

    def test_symbol_out_of_range(self):
        bad = MINIMAL.replace("[[2]]", "[[10]]")
        with pytest.raises(SymbolError):
            parse_task(bad, "t")

    def test_oversize_row(self):
        bad = MINIMAL.replace("[[1]]", json.dumps([[0] * 31]))
        with pytest.raises(DimensionError):
            parse_task(bad, "t")

    def test_ragged_rows(self):
        bad = MINIMAL.replace("[[1]]", "[[1,2],[3]]")
        with pytest.raises(DimensionError):
            parse_task(bad, "t")

    def test_missing_test_field(self):
        with pytest.raises(FormatError):
            parse_task('{"train":[{"input":[[0]],"output":[[0]]}]}', "t")

    def test_empty_train_rejected(self):
        with pytest.raises(FormatError):
            parse_task('{"train":[],"test":[{"input":[[0]],"output":[[0]]}]}', "t")

    def test_not_json(self):
        with pytest.raises(FormatError):
            parse_task("not json at all", "t")

    def test_unknown_fields_preserved(self):
        doc = '{"train":[{"input":[[0]],"output":[[0]]}],"test":[{"input":[[1]],"output":[[2]]}],"note":{"b":1,"a":2}}'
        t = parse_task(doc, "t")
        assert t.extra == (("note", '{"a":2,"b":1}'),)
        again = parse_task(serialize_task(t), "t")
        assert again == t


class TestSerialize:
    def test_round_trip_minimal(self):
        t = parse_task(MINIMAL, "t0")
        assert parse_task(serialize_task(t), "t0") == t

    def test_canonical_bytes(self):
        t = parse_task(MINIMAL, "t0")
        assert serialize_task(t).encode() == serialize_task(t).encode()
        reparsed = parse_task(serialize_task(t), "t0")
        assert serialize_task(reparsed) == serialize_task(t)

    def test_key_order(self):
        text = serialize_task(parse_task(MINIMAL, "t0"))
        assert text.index('"train"') < text.index('"test"')
        assert '"input":' in text and '"output":' in text
        assert " " not in text

    def test_round_trip_random_tasks(self):
        rng = random.Random(23)
        for i in range(300):
            t = random_task(rng, f"r{i}")
            assert parse_task(serialize_task(t), t.id) == t


class TestLoadDataset:
    def test_sorted_and_counted(self, tmp_path):
        for name in ("bbb", "aaa"):
            (tmp_path / f"{name}.json").write_text(MINIMAL)
        result = load_dataset(tmp_path)
        assert result.dataset.task_ids() == ["aaa", "bbb"]
        assert result.file_count == 2
        assert not result.failures

    def test_partial_failure_report(self, tmp_path):
        (tmp_path / "good.json").write_text(MINIMAL)
        (tmp_path / "bad.json").write_text("{broken")
        result = load_dataset(tmp_path)
        assert result.dataset.task_ids() == ["good"]
        assert len(result.failures) == 1
        assert result.failures[0].filename == "bad.json"
        assert len(result.dataset.tasks) + len(result.failures) == result.file_count
        report = format_load_report(result.failures)
        assert report.startswith("bad.json\tFormatError\t")

    def test_missing_directory(self, tmp_path):
        with pytest.raises(IoError):
            load_dataset(tmp_path / "nope")

    def test_split_size_warning(self, tmp_path):
        (tmp_path / "only.json").write_text(MINIMAL)
        with pytest.warns(UserWarning):
            result = load_dataset(tmp_path, Split.TRAINING)
        assert result.warnings


class TestStats:
    def test_constant_dims(self):
        g_in = grid_from_lists([[0] * 10] * 9)
        task = Task("t", (ExamplePair(g_in, g_in),), (ExamplePair(g_in, g_in),))
        stats = compute_stats(Dataset("d", (task,)))
        assert stats.median_height == 9
        assert stats.median_width == 10
        assert stats.task_count == 1
        assert stats.symbol_histogram[0] == 4 * 90
        assert sum(stats.symbol_histogram) == 4 * 90

    def test_mean_train_examples(self):
        rng = random.Random(5)
        tasks = tuple(random_task(rng, f"t{i}") for i in range(20))
        stats = compute_stats(Dataset("d", tasks))
        expected = sum(len(t.train) for t in tasks) / len(tasks)
        assert stats.mean_train_examples == pytest.approx(expected)

    def test_permutation_invariant(self):
        rng = random.Random(9)
        tasks = [random_task(rng, f"t{i}") for i in range(10)]
        a = compute_stats(Dataset("d", tuple(tasks)))
        rng.shuffle(tasks)
        b = compute_stats(Dataset("d", tuple(tasks)))
        assert a == b

    def test_empty_dataset(self):
        with pytest.raises(EmptyDatasetError):
            compute_stats(Dataset("d", ()))
