"""Command-line harness: fetch, validate, solve, metrics, serve.

Every artifact-producing command writes a run manifest (config snapshot,
dataset checksum, seed, version, timestamps). Result files themselves
contain no timestamps, so replaying a manifest's inputs reproduces them
byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .dsl import catalog_manifest, catalog_version, parse_program
from .errors import ArcError, EmptyDatasetError
from .fetch import DEFAULT_DATASET_URL, dataset_checksum, fetch_dataset
from .metrics import (
    ComplexityOracle,
    OracleKind,
    SolutionPair,
    intelligence_score,
    task_metrics_from_programs,
    write_intelligence_report,
)
from .protocol import read_trace, write_trace
from .synthesis import (
    Coding,
    SearchConfig,
    record_solver_trace,
    summary_table,
    write_solve_report,
)
from .taskio import Split, compute_stats, format_load_report, load_dataset

SPLIT_ALIASES = {
    "training": Split.TRAINING,
    "eval": Split.PUBLIC_EVAL,
    "public_eval": Split.PUBLIC_EVAL,
    "private": Split.PRIVATE,
    "custom": Split.CUSTOM,
}


def read_config(path: str | None) -> dict[str, str]:
    """Simple ``key=value`` per line; '#' starts a comment."""
    if not path:
        return {}
    out: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ArcError(f"bad config line (expected key=value): {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def search_config_from(options: dict[str, str], seed: int | None) -> SearchConfig:
    kwargs: dict = {}
    casts = {
        "max_description_length": float,
        "max_candidates_retained": int,
        "node_budget": int,
        "time_budget": float,
        "seed": int,
        "prune": lambda v: v.lower() in ("1", "true", "yes"),
        "diversity_rule": lambda v: v.lower() in ("1", "true", "yes"),
        "max_nodes": int,
        "settle_passes": int,
        "horizon_step": float,
        "restrict_literals": lambda v: v.lower() in ("1", "true", "yes"),
        "coding": lambda v: Coding(v),
    }
    for key, cast in casts.items():
        if key in options:
            kwargs[key] = cast(options[key])
    if seed is not None:
        kwargs["seed"] = seed
    return SearchConfig(**kwargs)


def oracle_from(options: dict[str, str]) -> ComplexityOracle:
    kwargs: dict = {}
    if "oracle_kind" in options:
        kwargs["kind"] = OracleKind(options["oracle_kind"])
    for key, cast in (
        ("search_budget", int),
        ("compressor_id", str),
        ("compressor_level", int),
        ("ref_cost_bits", float),
        ("opcode_bits", float),
    ):
        if key in options:
            kwargs[key] = cast(options[key])
    return ComplexityOracle(**kwargs)


def write_manifest(out_dir: Path, command: str, payload: dict) -> Path:
    doc = {
        "command": command,
        "tool_version": __version__,
        "catalog_version": catalog_version(),
        **payload,
    }
    path = out_dir / "run_manifest.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def _load_split_dir(directory: str, split_name: str):
    split = SPLIT_ALIASES[split_name]
    return load_dataset(directory, split)


def cmd_fetch(args) -> int:
    result = fetch_dataset(args.url, args.cache)
    print(f"cache: {result.cache_dir}")
    print(f"files: {result.file_count}")
    print(f"checksum: {result.checksum}")
    print(f"from_cache: {result.from_cache}")
    return 0


def cmd_validate(args) -> int:
    try:
        load = _load_split_dir(args.dataset_dir, args.split)
    except ArcError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    for w in load.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if load.failures:
        print(format_load_report(load.failures), file=sys.stderr)
    try:
        stats = compute_stats(load.dataset)
    except EmptyDatasetError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"tasks: {stats.task_count}")
    print(f"mean_train_examples: {stats.mean_train_examples:.3f}")
    print(f"median_height: {stats.median_height}")
    print(f"median_width: {stats.median_width}")
    print("symbol_histogram: " + " ".join(map(str, stats.symbol_histogram)))
    return 0 if not load.failures else 1


def _dir_checksum(directory: str) -> str:
    import hashlib

    files = {}
    for f in sorted(Path(directory).glob("*.json")):
        files[f.name] = hashlib.sha256(f.read_bytes()).hexdigest()
    return dataset_checksum(files)


def cmd_solve(args) -> int:
    started = time.time()
    load = _load_split_dir(args.dataset_dir, args.split)
    dataset = load.dataset
    if args.limit:
        from .taskio import Dataset

        dataset = Dataset(dataset.name, dataset.tasks[: args.limit], dataset.split)
    options = read_config(args.config)
    cfg = search_config_from(options, args.seed)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    traces_dir = out_dir / "traces"
    traces_dir.mkdir(exist_ok=True)

    from .synthesis import DatasetReport, check_solved, solve_task

    # Solve task by task, persisting as we go, so an interrupted run leaves
    # its completed reports behind and is flagged incomplete.
    reports = []
    interrupted = False
    try:
        for task in dataset.tasks:
            r = solve_task(task, cfg)
            r.solved = check_solved(task, r)
            write_solve_report(r, out_dir / "reports")
            if r.candidates:
                trace = record_solver_trace(task, r.candidates[0].program, seed=cfg.seed)
                (traces_dir / f"{task.id}.trace").write_text(write_trace(trace))
            reports.append(r)
    except KeyboardInterrupt:
        interrupted = True

    solved = sum(1 for r in reports if r.solved)
    fraction = solved / len(dataset.tasks) if dataset.tasks else 0.0
    report = DatasetReport(fraction_solved=fraction, reports=reports, config=cfg)
    summary = summary_table(report)
    if interrupted:
        summary += f"# incomplete: {len(reports)}/{len(dataset.tasks)} tasks solved before interrupt\n"
    (out_dir / "summary.tsv").write_text(summary)
    (out_dir / "catalog_manifest.tsv").write_text(catalog_manifest())
    write_manifest(
        out_dir,
        "solve",
        {
            "dataset_dir": str(args.dataset_dir),
            "dataset_checksum": _dir_checksum(args.dataset_dir),
            "split": args.split,
            "seed": cfg.seed,
            "config": {k: str(v) for k, v in asdict(cfg).items()},
            "incomplete": interrupted,
            "tasks_completed": len(reports),
            "tasks_total": len(dataset.tasks),
            "started": started,
            "finished": time.time(),
        },
    )
    if interrupted:
        print(
            f"interrupted after {len(reports)}/{len(dataset.tasks)} tasks; "
            f"partial results in {out_dir}",
            file=sys.stderr,
        )
        return 130
    print(f"fraction_solved: {report.fraction_solved:.6f}")
    print(f"out: {out_dir}")
    return 0


def cmd_metrics(args) -> int:
    started = time.time()
    solve_dir = Path(args.solve_dir)
    traces_dir = Path(args.traces_dir) if args.traces_dir else solve_dir / "traces"
    options = read_config(args.config)
    oracle = oracle_from(options)

    from .synthesis import read_solve_report

    tasks = []
    skipped: list[str] = []
    for report_path in sorted((solve_dir / "reports").glob("*.solve.json")):
        report = read_solve_report(report_path)
        if not report.candidates:
            continue
        trace_path = traces_dir / f"{report.task_id}.trace"
        if not trace_path.is_file():
            skipped.append(report.task_id)
            continue
        trace = read_trace(trace_path.read_text())
        best = report.candidates[0].program
        sp = SolutionPair(sol=best, train_sol=best, theta=1.0)
        # Snapshot at step t: curriculum prefix absorbed so far (blank at 0).
        snapshots = [
            b"\x1f".join(trace.data_bytes(u) for u in range(t)) for t in range(len(trace.steps))
        ]
        tasks.append(
            task_metrics_from_programs(report.task_id, sp, trace, snapshots, oracle)
        )
    if not tasks:
        print("error: no (solve report, trace) pairs found", file=sys.stderr)
        return 1
    report = intelligence_score(tasks, oracle)
    out_path = Path(args.out) if args.out else solve_dir / "intelligence_report.tsv"
    out_dir = out_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    write_intelligence_report(report, out_path)
    write_manifest(
        out_dir,
        "metrics",
        {
            "solve_dir": str(solve_dir),
            "traces_dir": str(traces_dir),
            "oracle": oracle.descriptor(),
            "skipped_missing_trace": skipped,
            "started": started,
            "finished": time.time(),
        },
    )
    for tid in skipped:
        print(f"warning: missing trace for {tid}; task skipped", file=sys.stderr)
    print(f"score: {report.score!r}")
    print(f"report: {out_path}")
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    load = _load_split_dir(args.dataset_dir, args.split)
    if load.failures:
        print(format_load_report(load.failures), file=sys.stderr)
        print("error: dataset contains invalid task files; refusing to serve", file=sys.stderr)
        return 1
    if not load.dataset.tasks:
        print("error: empty dataset", file=sys.stderr)
        return 1
    host, _, port = args.bind.partition(":")
    server = serve(
        load.dataset,
        session_dir=args.sessions,
        host=host or "127.0.0.1",
        port=int(port or 8008),
        static_dir=args.static,
    )
    print(f"serving {len(load.dataset.tasks)} tasks on http://{args.bind}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", help="download and cache the public dataset")
    p.add_argument("--url", default=DEFAULT_DATASET_URL)
    p.add_argument("--cache", default="~/.cache/arcengine/arc")
    p.set_defaults(fn=cmd_fetch)

    p = sub.add_parser("validate", help="validate a dataset directory and print stats")
    p.add_argument("dataset_dir")
    p.add_argument("--split", default="custom", choices=sorted(SPLIT_ALIASES))
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("solve", help="run the solver over a dataset")
    p.add_argument("dataset_dir")
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--split", default="custom", choices=sorted(SPLIT_ALIASES))
    p.add_argument("--limit", type=int, default=None, help="solve only the first N tasks")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("metrics", help="compute skill-acquisition metrics from solve output")
    p.add_argument("solve_dir")
    p.add_argument("--traces-dir", default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_metrics)

    p = sub.add_parser("serve", help="serve the human test session service")
    p.add_argument("dataset_dir")
    p.add_argument("--bind", default="127.0.0.1:8008")
    p.add_argument("--sessions", default="./sessions")
    p.add_argument("--static", default=None, help="directory of UI assets to serve at /")
    p.add_argument("--split", default="custom", choices=sorted(SPLIT_ALIASES))
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ArcError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
