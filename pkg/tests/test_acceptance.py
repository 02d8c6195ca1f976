"""Acceptance criteria, one test per criterion, one PASS/FAIL line each.

Criteria touching the public dataset run against a fetched copy (set
ARC_DATA_URL to point at a mirror, zip, or local tree). When the data
cannot be fetched in the current environment those criteria FAIL with a
BLOCKED message naming the cause; everything else runs regardless.
"""

import json
import math
import random
import time

import pytest

from arcengine.dsl import (
    EvalBudget,
    eval_program,
    outcome,
    parse_program,
    serialize_program,
    uniform_code_length,
)
from arcengine.dsl.generate import random_grid_lists, random_program
from arcengine.errors import ArcError
from arcengine.fetch import FetchResult
from arcengine.grid import Grid, grid_from_lists
from arcengine.metrics import (
    ComplexityOracle,
    CurriculumMetrics,
    OracleKind,
    SolutionPair,
    TaskInputs,
    complexity,
    generalization_difficulty,
    intelligence_score,
    priors_measure,
    relative_complexity,
)
from arcengine.mocks import build_mock_corpus
from arcengine.protocol import (
    ArcMode,
    InstrumentedSystem,
    IntelligentSystem,
    arc_adapter,
    decode_situation,
    make_grid_function_program,
    run_evaluation_phase,
    run_training_phase,
    write_trace,
)
from arcengine.synthesis import (
    SearchConfig,
    check_solved,
    score_dataset,
    solve_report_doc,
    solve_task,
)
from arcengine.taskio import (
    Dataset,
    ExamplePair,
    Split,
    Task,
    compute_stats,
    load_dataset,
    parse_task,
    serialize_task,
)


def report(cid: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"\nACCEPTANCE {cid}: {status}" + (f" ({detail})" if detail else ""))
    assert ok, f"{cid} failed: {detail}"


def blocked(cid: str, reason):
    print(f"\nACCEPTANCE {cid}: BLOCKED ({reason})")
    pytest.fail(
        f"{cid} requires the public dataset, which this environment cannot "
        f"fetch: {reason}. Set ARC_DATA_URL to a reachable copy to run it."
    )


def _require_public(public_dataset_result, cid):
    if isinstance(public_dataset_result, FetchResult):
        return public_dataset_result
    blocked(cid, public_dataset_result)


class TestCriterion1DatasetStatistics:
    def test_public_dataset_statistics(self, public_dataset_result):
        cid = "1-dataset-statistics"
        fetched = _require_public(public_dataset_result, cid)
        started = time.monotonic()
        training = load_dataset(fetched.split_dir("training"), Split.TRAINING)
        evaluation = load_dataset(fetched.split_dir("evaluation"), Split.PUBLIC_EVAL)
        problems = []
        if len(training.dataset.tasks) != 400:
            problems.append(f"training count {len(training.dataset.tasks)} != 400")
        if len(evaluation.dataset.tasks) != 400:
            problems.append(f"public eval count {len(evaluation.dataset.tasks)} != 400")
        if training.failures or evaluation.failures:
            problems.append("grid invariant violations during load")
        stats = compute_stats(training.dataset)
        if not 3.0 <= stats.mean_train_examples <= 3.6:
            problems.append(f"mean train examples {stats.mean_train_examples}")
        if not 8 <= stats.median_height <= 10:
            problems.append(f"median height {stats.median_height}")
        if not 9 <= stats.median_width <= 11:
            problems.append(f"median width {stats.median_width}")
        elapsed = time.monotonic() - started
        if elapsed >= 10.0:
            problems.append(f"runtime {elapsed:.1f}s >= 10s")
        report(cid, not problems, "; ".join(problems) or f"{elapsed:.1f}s")


class TestCriterion2RoundTrip:
    def test_random_generated_tasks(self):
        cid = "2-roundtrip-random"
        rng = random.Random(424242)
        started = time.monotonic()
        bad = 0
        for i in range(1000):
            def rgrid():
                h, w = rng.randint(1, 10), rng.randint(1, 10)
                return grid_from_lists(
                    [[rng.randrange(10) for _ in range(w)] for _ in range(h)]
                )

            task = Task(
                id=f"rand{i}",
                train=tuple(ExamplePair(rgrid(), rgrid()) for _ in range(rng.randint(1, 5))),
                test=tuple(ExamplePair(rgrid(), rgrid()) for _ in range(rng.randint(1, 3))),
            )
            if parse_task(serialize_task(task), task.id) != task:
                bad += 1
        elapsed = time.monotonic() - started
        report(cid, bad == 0 and elapsed < 30.0, f"{bad} failures, {elapsed:.1f}s")

    def test_public_tasks(self, public_dataset_result):
        cid = "2-roundtrip-public"
        fetched = _require_public(public_dataset_result, cid)
        started = time.monotonic()
        bad = []
        for split in ("training", "evaluation"):
            result = load_dataset(fetched.split_dir(split))
            for task in result.dataset.tasks:
                if parse_task(serialize_task(task), task.id) != task:
                    bad.append(task.id)
        elapsed = time.monotonic() - started
        report(cid, not bad and elapsed < 30.0, f"{len(bad)} failures, {elapsed:.1f}s")


class TestCriterion3SolverSoundnessDeterminism:
    def test_mock_corpus(self):
        cid = "3-solver-soundness-determinism"
        ds = build_mock_corpus()
        cfg = SearchConfig()
        problems = []
        solved = 0
        docs = []
        for task in ds.tasks:
            r = solve_task(task, cfg)
            if r.wall_time > 60.0:
                problems.append(f"{task.id}: {r.wall_time:.0f}s > 60s")
            for cand in r.candidates:
                for p in task.train:
                    if eval_program(cand.program, p.input) != p.output:
                        problems.append(f"{task.id}: unsound candidate {cand.text}")
            if check_solved(task, r):
                solved += 1
            docs.append(json.dumps(solve_report_doc(r), sort_keys=True))
        # The 18-of-20 target scaled to this corpus size (>= 90%).
        need = math.ceil(0.9 * len(ds.tasks))
        if solved < need:
            problems.append(f"solved {solved}/{len(ds.tasks)} < {need}")
        redo = [
            json.dumps(solve_report_doc(solve_task(task, cfg)), sort_keys=True)
            for task in ds.tasks
        ]
        if redo != docs:
            problems.append("re-run not byte-identical")
        report(cid, not problems, "; ".join(problems) or f"solved {solved}/{len(ds.tasks)}")


class TestCriterion4DeskScaleCoverage:
    def test_public_training_coverage(self, public_dataset_result):
        cid = "4-desk-scale-coverage"
        fetched = _require_public(public_dataset_result, cid)
        result = load_dataset(fetched.split_dir("training"), Split.TRAINING)
        cfg = SearchConfig(time_budget=55.0)
        dataset_report = score_dataset(result.dataset, cfg)
        frac = dataset_report.fraction_solved
        report(cid, frac >= 0.05, f"fraction solved {frac:.4f}")


class TestCriterion5PruningSafety:
    def test_exhaustive_equivalence_at_small_horizon(self):
        cid = "5-pruning-safety"
        started = time.monotonic()
        horizon = 3 * uniform_code_length() + 7.0
        base = dict(
            max_description_length=horizon,
            node_budget=10_000_000,
            settle_passes=99,
            horizon_step=1000.0,  # one exhaustive pass to the horizon
        )
        discrepancies = []
        for task in build_mock_corpus().tasks:
            pruned = solve_task(task, SearchConfig(prune=True, **base))
            full = solve_task(task, SearchConfig(prune=False, **base))
            if bool(pruned.candidates) != bool(full.candidates):
                discrepancies.append(f"{task.id}: found-mismatch")
            elif pruned.candidates and abs(
                pruned.candidates[0].dl - full.candidates[0].dl
            ) > 1e-9:
                discrepancies.append(f"{task.id}: min-dl mismatch")
            elif pruned.candidates and pruned.candidates[0].text != full.candidates[0].text:
                discrepancies.append(f"{task.id}: best-candidate mismatch")
        elapsed = time.monotonic() - started
        report(
            cid,
            not discrepancies and elapsed < 600.0,
            "; ".join(discrepancies) or f"{elapsed:.0f}s",
        )


class TestCriterion6MetricsFixtures:
    def test_a_direct_substitution(self):
        cid = "6a-substitution-case"
        tasks = [
            TaskInputs(
                "fixture",
                omega_theta=1.0,
                curricula=(
                    CurriculumMetrics(p_c=1.0, gd_dev_aware=0.5, priors=0.25, experience=0.25),
                ),
            )
        ]
        score = intelligence_score(tasks).score
        report(cid, abs(score - 1.0) < 1e-12, f"score {score!r}")

    def test_b_identical_solutions_zero_gd(self):
        cid = "6b-identical-solutions"
        oracle = ComplexityOracle()
        sol = parse_program("(rotate90 identity)")
        train = parse_program("(compose identity (rotate90 identity))")
        gd = generalization_difficulty(SolutionPair(sol, train), oracle)
        report(cid, gd.value == 0.0, f"gd {gd.value}")

    def test_c_ranges_and_clamp_flags(self):
        cid = "6c-ranges-and-clamps"
        rng = random.Random(616161)
        light = ComplexityOracle(search_budget=25)
        compressor = ComplexityOracle(kind=OracleKind.COMPRESSOR)
        bad = 0
        clamp_flags = 0
        n = 10_000
        for i in range(n):
            oracle = light if i % 2 == 0 else compressor
            sol = random_program(rng, max_depth=2, special_forms=False)
            other = random_program(rng, max_depth=2, special_forms=False)
            if i % 4 < 2:
                value = generalization_difficulty(SolutionPair(sol, other), oracle)
            else:
                snapshot = json.dumps(
                    {"programs": [serialize_program(other)]}
                ).encode()
                value = priors_measure(snapshot, sol, 1.0, oracle)
            if not 0.0 <= value.value <= 1.0:
                bad += 1
            raw_in_range = not value.clamped
            if value.clamped:
                clamp_flags += 1
            del raw_in_range
        report(
            cid,
            bad == 0 and clamp_flags > 0,
            f"{n} pairs, {bad} out of range, {clamp_flags} clamps flagged",
        )

    def test_d_budget_monotonicity(self):
        cid = "6d-budget-monotonicity"
        rng = random.Random(62626)
        violations = 0
        for _ in range(300):
            p = random_program(rng, max_depth=3, special_forms=False)
            small = complexity(p, ComplexityOracle(search_budget=150))
            large = complexity(p, ComplexityOracle(search_budget=300))
            if large > small + 1e-12:
                violations += 1
        report(cid, violations == 0, f"{violations} violations over 300 programs")


class TestCriterion7ProtocolDiscipline:
    def test_protocol_discipline(self):
        cid = "7-protocol-discipline"
        ds = build_mock_corpus()
        problems = []
        for task in ds.tasks[:8]:
            wrapper = InstrumentedSystem(
                IntelligentSystem(
                    initial_state=b"",
                    skill_program_gen=lambda s, rng: make_grid_function_program(lambda g: g),
                    is_update=lambda si, r, f, s, rng: s,
                    system_id="echo",
                )
            )
            system = wrapper.as_system()
            sp, trace = run_training_phase(
                arc_adapter(task, ArcMode.TRAIN), system, budget=50, seed=13
            )
            before = wrapper.total_calls
            if before == 0:
                problems.append(f"{task.id}: training never used the system")

            # Evaluation phase: count situations per example and feedback width.
            adapter = arc_adapter(task, ArcMode.EVAL)
            seen: dict[bytes, int] = {}
            state = adapter.initial_state
            rng = random.Random(13)
            for _ in range(100):
                situation = adapter.situation_gen(state, rng)
                if situation is None:
                    break
                grid, _trial = decode_situation(situation.payload)
                seen[grid.tobytes()] = seen.get(grid.tobytes(), 0) + 1
                from arcengine.protocol import Response, encode_response

                response = Response(encode_response(grid_from_lists([[9]])))
                _score, feedback = adapter.scoring(situation, response, state, rng)
                if feedback.n_bits != 1:
                    problems.append(f"{task.id}: feedback {feedback.n_bits} bits")
                state = adapter.task_update(response, state, rng)
            if any(v > 3 for v in seen.values()):
                problems.append(f"{task.id}: more than 3 trials for an example")

            run_evaluation_phase(adapter, sp, budget=50, seed=13)
            if wrapper.total_calls != before:
                problems.append(f"{task.id}: system invoked during evaluation")

            _, trace2 = run_training_phase(
                arc_adapter(task, ArcMode.TRAIN),
                wrapper.as_system(),
                budget=50,
                seed=13,
            )
            if write_trace(trace2) != write_trace(trace):
                problems.append(f"{task.id}: replay not byte-identical")
        report(cid, not problems, "; ".join(problems))


class TestCriterion8InterpreterRobustness:
    def test_million_fuzzed_evaluations(self):
        cid = "8a-fuzz-totality"
        rng = random.Random(818181)
        budget = EvalBudget(max_nodes_evaluated=500, max_cells_touched=50_000)
        programs = [random_program(rng, max_depth=3) for _ in range(2_000)]
        grids = [grid_from_lists(random_grid_lists(rng, max_dim=5)) for _ in range(500)]
        outcomes = {"grid": 0, "eval_error": 0, "budget": 0}
        crashes = 0
        n = 0
        for p in programs:
            for g in grids:
                n += 1
                try:
                    kind, value = outcome(p, g, budget)
                    outcomes[kind] += 1
                    if kind == "grid" and not (
                        1 <= value.height <= 30 and 1 <= value.width <= 30
                    ):
                        crashes += 1
                except Exception:
                    crashes += 1
        report(
            cid,
            n == 1_000_000 and crashes == 0,
            f"{n} evaluations, {crashes} crashes, outcomes {outcomes}",
        )

    def test_involutions_and_scale_inverse(self):
        cid = "8b-involutions"
        rng = random.Random(828282)
        involutions = [
            parse_program("(flip_h (flip_h identity))"),
            parse_program("(flip_v (flip_v identity))"),
            parse_program("(transpose (transpose identity))"),
            parse_program("(rotate90 (rotate90 (rotate90 (rotate90 identity))))"),
        ]
        scale_pairs = {
            2: parse_program("(scale_down (scale_up identity 2) 2)"),
            3: parse_program("(scale_down (scale_up identity 3) 3)"),
        }
        bad = 0
        for _ in range(10_000):
            g = grid_from_lists(random_grid_lists(rng, max_dim=8))
            for p in involutions:
                if eval_program(p, g, validate=False) != g:
                    bad += 1
            for k, p in scale_pairs.items():
                if g.height * k <= 30 and g.width * k <= 30:
                    if eval_program(p, g, validate=False) != g:
                        bad += 1
        report(cid, bad == 0, f"{bad} identity violations over 10,000 grids")
