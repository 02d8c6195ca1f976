"""Task ingestion, validation, canonical serialization, and dataset stats.

The interchange format is the public ARC one: a JSON object with ``train``
and ``test`` arrays of {input, output} grid pairs, each grid a list of
rows of integers 0-9. Serialization is canonical (whitespace-free, fixed
key order) so equal tasks always produce identical bytes.
"""

from __future__ import annotations

import json
import statistics
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import EmptyDatasetError, FormatError, IoError
from .grid import Grid, grid_from_lists

EXPECTED_SPLIT_SIZES = {"training": 400, "public_eval": 400}


@dataclass(frozen=True)
class ExamplePair:
    input: Grid
    output: Grid


@dataclass(frozen=True)
class Task:
    id: str
    train: tuple[ExamplePair, ...]
    test: tuple[ExamplePair, ...]
    extra: tuple[tuple[str, str], ...] = ()  # unknown top-level fields, canonical JSON values

    def all_grids(self) -> list[Grid]:
        out = []
        for pair in (*self.train, *self.test):
            out.append(pair.input)
            out.append(pair.output)
        return out


class Split(Enum):
    TRAINING = "training"
    PUBLIC_EVAL = "public_eval"
    PRIVATE = "private"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Dataset:
    name: str
    tasks: tuple[Task, ...]
    split: Split = Split.CUSTOM

    def __post_init__(self):
        ids = [t.id for t in self.tasks]
        if len(ids) != len(set(ids)):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise FormatError(f"duplicate task ids: {dupes}")

    def task_ids(self) -> list[str]:
        return [t.id for t in self.tasks]

    def by_id(self, task_id: str) -> Task:
        for t in self.tasks:
            if t.id == task_id:
                return t
        raise KeyError(task_id)


@dataclass(frozen=True)
class DatasetStats:
    task_count: int
    mean_train_examples: float
    median_height: int
    median_width: int
    symbol_histogram: tuple[int, ...]


@dataclass(frozen=True)
class LoadFailure:
    filename: str
    kind: str
    detail: str


@dataclass
class LoadResult:
    dataset: Dataset
    failures: list[LoadFailure] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    file_count: int = 0


def _parse_pair(obj, where: str) -> ExamplePair:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: example must be an object")
    for key in ("input", "output"):
        if key not in obj:
            raise FormatError(f"{where}: missing '{key}' grid")
        if not isinstance(obj[key], list):
            raise FormatError(f"{where}: '{key}' must be a list of rows")
    return ExamplePair(
        input=grid_from_lists(obj["input"]), output=grid_from_lists(obj["output"])
    )


def parse_task(text: str | bytes, task_id: str) -> Task:
    """Parse and fully validate one task document.

    Raises FormatError for structural problems, SymbolError / DimensionError
    for grid invariant violations. Unknown top-level fields are preserved.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object")
    for key in ("train", "test"):
        if key not in doc:
            raise FormatError(f"missing '{key}' array")
        if not isinstance(doc[key], list) or not doc[key]:
            raise FormatError(f"'{key}' must be a nonempty array")
    train = tuple(
        _parse_pair(p, f"train[{i}]") for i, p in enumerate(doc["train"])
    )
    test = tuple(_parse_pair(p, f"test[{i}]") for i, p in enumerate(doc["test"]))
    extra = tuple(
        (k, json.dumps(doc[k], sort_keys=True, separators=(",", ":")))
        for k in sorted(doc)
        if k not in ("train", "test")
    )
    return Task(id=task_id, train=train, test=test, extra=extra)


def serialize_grid(g: Grid) -> str:
    return json.dumps(g.tolists(), separators=(",", ":"))


def _serialize_pair(p: ExamplePair) -> str:
    return '{"input":%s,"output":%s}' % (serialize_grid(p.input), serialize_grid(p.output))


def serialize_task(t: Task) -> str:
    """Canonical text: compact, keys ordered train, test, then extras."""
    parts = [
        '"train":[%s]' % ",".join(_serialize_pair(p) for p in t.train),
        '"test":[%s]' % ",".join(_serialize_pair(p) for p in t.test),
    ]
    parts.extend('"%s":%s' % (k, v) for k, v in t.extra)
    return "{%s}" % ",".join(parts)


def load_dataset(directory: str | Path, split: Split = Split.CUSTOM) -> LoadResult:
    """Load every ``*.json`` task file under ``directory``.

    Per-file failures never abort the load; they are aggregated into the
    result so that loaded + failed always equals the number of files seen.
    """
    root = Path(directory)
    if not root.is_dir():
        raise IoError(f"not a directory: {root}")
    files = sorted(root.glob("*.json"))
    tasks: list[Task] = []
    failures: list[LoadFailure] = []
    for path in files:
        try:
            tasks.append(parse_task(path.read_text(), path.stem))
        except OSError as e:
            failures.append(LoadFailure(path.name, "IoError", str(e)))
        except Exception as e:
            failures.append(LoadFailure(path.name, type(e).__name__, str(e)))
    tasks.sort(key=lambda t: t.id)
    result = LoadResult(
        dataset=Dataset(name=root.name, tasks=tuple(tasks), split=split),
        failures=failures,
        file_count=len(files),
    )
    expected = EXPECTED_SPLIT_SIZES.get(split.value)
    if expected is not None and len(tasks) != expected:
        msg = f"split {split.value}: expected {expected} tasks, loaded {len(tasks)}"
        result.warnings.append(msg)
        warnings.warn(msg)
    return result


def format_load_report(failures: list[LoadFailure]) -> str:
    """One line per failure: ``<filename>\\t<error-kind>\\t<detail>``."""
    return "\n".join(f"{f.filename}\t{f.kind}\t{f.detail}" for f in failures)


def compute_stats(d: Dataset) -> DatasetStats:
    """Counts and medians over every grid in the dataset.

    Train and test pairs, inputs and outputs, are pooled for the medians
    (lower median for even counts).
    """
    if not d.tasks:
        raise EmptyDatasetError("dataset has no tasks")
    heights: list[int] = []
    widths: list[int] = []
    hist = [0] * 10
    for task in d.tasks:
        for g in task.all_grids():
            heights.append(g.height)
            widths.append(g.width)
            values, counts = _bincount(g)
            for v, c in zip(values, counts):
                hist[v] += c
    return DatasetStats(
        task_count=len(d.tasks),
        mean_train_examples=statistics.fmean(len(t.train) for t in d.tasks),
        median_height=_lower_median(heights),
        median_width=_lower_median(widths),
        symbol_histogram=tuple(hist),
    )


def _bincount(g: Grid):
    import numpy as np

    counts = np.bincount(g.a.ravel(), minlength=10)
    return range(10), [int(c) for c in counts]


def _lower_median(values: list[int]) -> int:
    return statistics.median_low(values)
