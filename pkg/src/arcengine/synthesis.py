"""Enumerative program search ranked by description length.

Bottom-up: pools of typed subexpressions grow level by level under an
iteratively deepened description-length horizon; observational
equivalence on the demonstration inputs keeps one (cheapest) member per
behavior class. A program is a candidate when it reproduces every
demonstration output exactly. Completing a horizon pass guarantees the
retained candidates are globally minimal in description length.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .dsl.interp import EvalBudget, eval_program
from .dsl.lang import (
    Apply,
    DEFAULT_MAX_NODES,
    Direction,
    DslType,
    Literal,
    Program,
    catalog,
    description_length,
    parse_program,
    serialize_program,
    uniform_code_length,
)
from .errors import BudgetExceeded, EvalError
from .grid import Grid
from .protocol import (
    ArcMode,
    CurriculumTrace,
    IntelligentSystem,
    Response,
    SkillProgram,
    arc_adapter,
    decode_situation,
    encode_response,
    make_trial_sequenced_program,
    run_evaluation_phase,
    run_training_phase,
)
from .taskio import Dataset, ExamplePair, Task


class Coding(Enum):
    UNIFORM = "uniform"
    TRAINING_WEIGHTED = "training_weighted"


@dataclass(frozen=True)
class SearchConfig:
    max_description_length: float = 44.0
    max_candidates_retained: int = 3
    node_budget: int = 600_000  # total candidate evaluations across all passes
    time_budget: float | None = None  # advisory; budget-based stops are exact
    coding: Coding = Coding.UNIFORM
    coding_table: tuple[tuple[str, float], ...] = ()
    seed: int = 0
    prune: bool = True
    diversity_rule: bool = False
    max_nodes: int = DEFAULT_MAX_NODES
    settle_passes: int = 0  # extra horizon passes after the first candidate
    horizon_step: float = 2.0  # bits of description length added per pass
    # Search only color literals observed in the demonstrations and int
    # literals up to the largest demonstrated dimension; literal bit costs
    # are unchanged (the restriction is a pool policy, not a coding change).
    restrict_literals: bool = True

    def __post_init__(self):
        if self.max_candidates_retained < 1:
            raise ValueError("max_candidates_retained must be >= 1")
        if self.node_budget < 1 or self.max_description_length <= 0:
            raise ValueError("budgets must be positive")

    def code_lengths(self) -> dict[str, float]:
        if self.coding is Coding.TRAINING_WEIGHTED and self.coding_table:
            return dict(self.coding_table)
        return {}


@dataclass(frozen=True)
class Candidate:
    program: Program
    dl: float
    consistent: bool = True

    @property
    def text(self) -> str:
        return serialize_program(self.program)


@dataclass
class SolveReport:
    task_id: str
    candidates: list[Candidate]
    predictions: list[list[Grid]]  # per test input, in candidate order
    nodes_evaluated: int
    wall_time: float
    solved: bool | None = None

    @property
    def best_dl(self) -> float | None:
        return self.candidates[0].dl if self.candidates else None


@dataclass
class DatasetReport:
    fraction_solved: float
    reports: list[SolveReport]
    config: SearchConfig


class _Entry:
    __slots__ = ("dl", "nodes", "values", "expr", "text", "alive")

    def __init__(self, dl, nodes, values, expr, text):
        self.dl = dl
        self.nodes = nodes
        self.values = values
        self.expr = expr
        self.text = text
        self.alive = True


def _literal_seeds(
    n_inputs: int, colors: tuple[int, ...], ints: tuple[int, ...]
) -> list[tuple[DslType, _Entry]]:
    seeds = []
    for v in colors:
        lit = Literal(DslType.COLOR, v)
        seeds.append((DslType.COLOR, _Entry(lit.bits(), 0, (v,) * n_inputs, lit, str(v))))
    for v in ints:
        lit = Literal(DslType.INT, v)
        seeds.append((DslType.INT, _Entry(lit.bits(), 0, (v,) * n_inputs, lit, str(v))))
    for d in Direction:
        lit = Literal(DslType.DIRECTION, d)
        seeds.append(
            (DslType.DIRECTION, _Entry(lit.bits(), 0, (d,) * n_inputs, lit, d.name.lower()))
        )
    return seeds


class _Search:
    """One enumeration run over a fixed set of demonstration pairs."""

    def __init__(self, demo_inputs: list[Grid], demo_outputs: list[Grid], cfg: SearchConfig):
        self.cfg = cfg
        self.inputs = tuple(demo_inputs)
        self.target = tuple(demo_outputs)
        self.costs = cfg.code_lengths()
        self.prims = [
            s for s in catalog() if s.searchable and s.arity > 0 and s.impl is not None
        ]
        self.prims.sort(key=lambda s: s.name)
        self.evaluated = 0
        self.candidates: dict[str, tuple[float, str, Program]] = {}
        self.deadline = None if cfg.time_budget is None else time.monotonic() + cfg.time_budget
        # Once max_candidates_retained candidates exist, expressions costlier
        # than the worst of them can never matter: shrink the working horizon.
        self.cap = math.inf
        if cfg.restrict_literals:
            palette: set[int] = set()
            max_dim = 1
            for g in (*self.inputs, *self.target):
                palette.update(int(v) for v in g.a.ravel())
                max_dim = max(max_dim, g.height, g.width)
            self.colors = tuple(sorted(palette))
            self.ints = tuple(range(0, min(9, max_dim) + 1))
        else:
            self.colors = tuple(range(10))
            self.ints = tuple(range(10))

    def _cost(self, name: str) -> float:
        c = self.costs.get(name)
        return c if c is not None else uniform_code_length()

    def out_of_budget(self) -> bool:
        if self.evaluated >= self.cfg.node_budget:
            return True
        if self.deadline is not None and time.monotonic() > self.deadline:
            return True
        return False

    def _record_candidate(self, dl: float, text: str, expr: Program) -> None:
        if text in self.candidates:
            return
        self.candidates[text] = (dl, text, expr)
        if len(self.candidates) >= self.cfg.max_candidates_retained:
            dls = sorted(v[0] for v in self.candidates.values())
            self.cap = dls[self.cfg.max_candidates_retained - 1]

    def run(self) -> None:
        step = self.cfg.horizon_step
        first = uniform_code_length()  # nothing is cheaper than one node
        hit_pass: int | None = None
        k = 1
        while True:
            horizon = min(first + (k - 1) * step + 1e-9, self.cfg.max_description_length)
            self._pass(horizon)
            if hit_pass is None and self.candidates:
                hit_pass = k
            if self.out_of_budget():
                return
            if len(self.candidates) >= self.cfg.max_candidates_retained:
                return
            if hit_pass is not None and k >= hit_pass + self.cfg.settle_passes:
                return
            if horizon >= self.cfg.max_description_length:
                return
            k += 1

    def _pass(self, horizon: float) -> None:
        """Full bottom-up closure of the expression space with dl <= horizon."""
        cfg = self.cfg
        prune = cfg.prune
        target = self.target
        pools: dict[DslType, list[_Entry]] = {t: [] for t in DslType}
        seen: dict[DslType, dict] = {t: {} for t in DslType}
        grid_t = DslType.GRID

        frontier: list[_Entry] = []

        def add_entry(t: DslType, entry: _Entry) -> None:
            key = entry.values if prune else entry.text
            table = seen[t]
            old = table.get(key)
            if old is not None:
                if (entry.dl, entry.text) < (old.dl, old.text):
                    old.alive = False
                    table[key] = entry
                    pools[t].append(entry)
                    frontier.append(entry)
                return
            table[key] = entry
            pools[t].append(entry)
            frontier.append(entry)

        for t, e in _literal_seeds(len(self.inputs), self.colors, self.ints):
            if e.dl <= min(horizon, self.cap):
                add_entry(t, _Entry(e.dl, e.nodes, e.values, e.expr, e.text))
        ident_cost = self._cost("identity")
        if ident_cost <= min(horizon, self.cap):
            if self.inputs == target:
                self._record_candidate(ident_cost, "identity", Apply("identity"))
            add_entry(grid_t, _Entry(ident_cost, 1, self.inputs, Apply("identity"), "identity"))

        # Round-based closure: combine only where at least one child is new,
        # so every combination is generated exactly once per pass (and again
        # whenever a cheaper representative replaces an equivalent one).
        boundary = {t: 0 for t in DslType}
        while frontier:
            if self.out_of_budget():
                return
            old_end = boundary
            boundary = {t: len(pools[t]) for t in DslType}
            frontier = []
            key = _entry_key
            slices: dict[DslType, tuple[list, list, list]] = {}
            for t in DslType:
                entries = pools[t]
                old_sorted = sorted(
                    (e for e in entries[: old_end[t]] if e.alive), key=key
                )
                fresh_sorted = sorted(
                    (e for e in entries[old_end[t] : boundary[t]] if e.alive), key=key
                )
                all_sorted = sorted(old_sorted + fresh_sorted, key=key)
                slices[t] = (old_sorted, fresh_sorted, all_sorted)
            for prim in self.prims:
                self._combine(prim, slices, seen, horizon, add_entry)
                if self.out_of_budget():
                    return

    def _combine(self, prim, slices, seen, horizon, add_entry) -> None:
        """Enumerate applications of one primitive with >= 1 frontier child."""
        arity = prim.arity
        impl = prim.impl
        node_cost = self._cost(prim.name)
        indexes = range(len(self.inputs))
        cfg_max_nodes = self.cfg.max_nodes
        prune = self.cfg.prune
        ret = prim.ret_type
        is_grid = ret is DslType.GRID
        target = self.target
        seen_ret = seen[ret]
        budget = self.cfg.node_budget

        for fresh_slot in range(arity):
            ranges = []
            feasible = True
            for j, t in enumerate(prim.arg_types):
                old_sorted, fresh_sorted, all_sorted = slices[t]
                sub = (
                    old_sorted
                    if j < fresh_slot
                    else fresh_sorted
                    if j == fresh_slot
                    else all_sorted
                )
                if not sub:
                    feasible = False
                    break
                ranges.append(sub)
            if not feasible:
                continue
            min_tail = [0.0] * (arity + 1)
            for j in range(arity - 1, -1, -1):
                min_tail[j] = min_tail[j + 1] + ranges[j][0].dl

            chosen: list[_Entry] = []

            def fill(j: int, dl_used: float, nodes_used: int):
                if j == arity:
                    if self.evaluated >= budget:
                        return
                    self.evaluated += 1
                    try:
                        values = tuple(
                            impl(*(c.values[i] for c in chosen)) for i in indexes
                        )
                    except (EvalError, BudgetExceeded):
                        return
                    except (ArithmeticError, LookupError, ValueError, TypeError, AttributeError):
                        return
                    consistent = is_grid and values == target
                    if not consistent and prune:
                        # Fast path: dominated behavior needs no AST or text.
                        old = seen_ret.get(values)
                        if old is not None and old.dl < dl_used:
                            return
                    expr = Apply(prim.name, tuple(c.expr for c in chosen))
                    text = "(" + " ".join([prim.name] + [c.text for c in chosen]) + ")"
                    if consistent:
                        self._record_candidate(dl_used, text, expr)
                    add_entry(ret, _Entry(dl_used, nodes_used, values, expr, text))
                    return
                cap = min(horizon, self.cap)
                tail = min_tail[j + 1]
                for e in ranges[j]:
                    dl = dl_used + e.dl
                    if dl + tail > cap:
                        break
                    if not e.alive:
                        continue
                    nodes = nodes_used + e.nodes
                    if nodes > cfg_max_nodes:
                        continue
                    chosen.append(e)
                    fill(j + 1, dl, nodes)
                    chosen.pop()
                    if self.evaluated >= budget:
                        return

            fill(0, node_cost, 1)


def _entry_key(e: _Entry):
    return (e.dl, e.text)


def solve_task(task: Task, cfg: SearchConfig = SearchConfig()) -> SolveReport:
    """Search for programs consistent with all demonstration pairs.

    Deterministic for a fixed config (when no time budget is set). An
    empty candidate list is a valid result meaning "unsolved".
    """
    started = time.monotonic()
    demo_inputs = [p.input for p in task.train]
    demo_outputs = [p.output for p in task.train]
    search = _Search(demo_inputs, demo_outputs, cfg)
    search.run()

    ranked = sorted(search.candidates.values())
    chosen: list[Candidate] = []
    eval_budget = EvalBudget(max_nodes_evaluated=100_000, max_cells_touched=10_000_000)
    for dl, text, expr in ranked:
        if len(chosen) >= cfg.max_candidates_retained and not cfg.diversity_rule:
            break
        # Soundness assertion: re-verify through the real interpreter.
        ok = all(
            eval_program(expr, gi, eval_budget) == go
            for gi, go in zip(demo_inputs, demo_outputs)
        )
        if not ok:
            raise AssertionError(f"inconsistent candidate emitted: {text}")
        chosen.append(Candidate(program=expr, dl=dl))

    if cfg.diversity_rule and len(chosen) > cfg.max_candidates_retained:
        chosen = _diversify(chosen, [p.input for p in task.test], cfg, eval_budget)
    chosen = chosen[: cfg.max_candidates_retained]

    predictions: list[list[Grid]] = []
    for pair in task.test:
        row: list[Grid] = []
        for cand in chosen:
            try:
                row.append(eval_program(cand.program, pair.input, eval_budget))
            except (EvalError, BudgetExceeded):
                continue
        predictions.append(row)

    return SolveReport(
        task_id=task.id,
        candidates=chosen,
        predictions=predictions,
        nodes_evaluated=search.evaluated,
        wall_time=time.monotonic() - started,
    )


def _diversify(cands, test_inputs, cfg, eval_budget):
    """Prefer candidates whose test predictions differ from already-picked
    ones; fall back to rank order when diversity is impossible."""

    def signature(c: Candidate):
        sig = []
        for gi in test_inputs:
            try:
                sig.append(eval_program(c.program, gi, eval_budget))
            except (EvalError, BudgetExceeded):
                sig.append(None)
        return tuple(sig)

    picked: list[Candidate] = [cands[0]]
    sigs = {signature(cands[0])}
    rest = cands[1:]
    for c in rest:
        if len(picked) >= cfg.max_candidates_retained:
            break
        s = signature(c)
        # A candidate that faults on a test input wastes its trial there;
        # prefer ones that produce genuinely new answers.
        if s not in sigs and not any(g is None for g in s):
            picked.append(c)
            sigs.add(s)
    for c in rest:
        if len(picked) >= cfg.max_candidates_retained:
            break
        if c not in picked:
            picked.append(c)
    return picked


def prune_equivalent(
    pool: list[Program], demo_inputs: list[Grid]
) -> list[Program]:
    """Keep one representative per demo-output equivalence class.

    The lowest-(dl, text) member represents each class; expressions that
    fault on any demonstration input are quarantined (dropped), never
    merged into a class.
    """
    budget = EvalBudget(max_nodes_evaluated=100_000, max_cells_touched=10_000_000)
    classes: dict[tuple, tuple[float, str, Program]] = {}
    for p in pool:
        try:
            vec = tuple(eval_program(p, gi, budget) for gi in demo_inputs)
        except (EvalError, BudgetExceeded):
            continue
        key = (description_length(p), serialize_program(p), p)
        old = classes.get(vec)
        if old is None or key[:2] < old[:2]:
            classes[vec] = key
    survivors = sorted(classes.values())
    return [p for _, _, p in survivors]


def score_dataset(dataset: Dataset, cfg: SearchConfig = SearchConfig()) -> DatasetReport:
    """Solve every task and score it under the 3-trial evaluation rule.

    Trials map to candidates in rank order: the adapter re-presents a
    test input with an incremented trial index after each wrong answer,
    and the (stateless) skill program answers with that candidate.
    """
    reports = []
    solved_count = 0
    for task in dataset.tasks:
        report = solve_task(task, cfg)
        report.solved = check_solved(task, report)
        solved_count += int(report.solved)
        reports.append(report)
    fraction = solved_count / len(dataset.tasks) if dataset.tasks else 0.0
    return DatasetReport(fraction_solved=fraction, reports=reports, config=cfg)


def check_solved(task: Task, report: SolveReport) -> bool:
    """Run the evaluation-phase protocol over the report's candidates."""
    if not report.candidates:
        return False
    eval_budget = EvalBudget(max_nodes_evaluated=100_000, max_cells_touched=10_000_000)
    programs = [c.program for c in report.candidates]

    def answers(grid: Grid, trial: int) -> Grid:
        p = programs[min(trial, len(programs) - 1)]
        return eval_program(p, grid, eval_budget)

    sp = make_trial_sequenced_program(answers, name=f"solver:{task.id}")
    adapter = arc_adapter(task, ArcMode.EVAL)
    result = run_evaluation_phase(adapter, sp, budget=3 * len(task.test) + 1)
    return result.total >= 1.0


# ---------------------------------------------------------------------------
# Protocol integration


def program_skill(program: Program, name: str = "dsl_program") -> SkillProgram:
    """Wrap a catalog program as a stateless protocol skill program."""
    budget = EvalBudget(max_nodes_evaluated=100_000, max_cells_touched=10_000_000)

    def run(situation, state):
        grid, _trial = decode_situation(situation.payload)
        return Response(encode_response(eval_program(program, grid, budget))), state

    return SkillProgram(program=run, name=name)


def record_solver_trace(task: Task, program: Program, seed: int = 0) -> CurriculumTrace:
    """Run the training phase with a system that always plays ``program``
    and record the resulting curriculum (demonstrations + feedback)."""
    sp = program_skill(program, name=serialize_program(program))

    system = IntelligentSystem(
        initial_state=b"",
        skill_program_gen=lambda state, rng: sp,
        is_update=lambda situation, response, feedback, state, rng: state,
        system_id="fixed_program",
    )
    _, trace = run_training_phase(
        arc_adapter(task, ArcMode.TRAIN), system, budget=len(task.train), seed=seed
    )
    return trace


def synthesis_system(
    cfg: SearchConfig = SearchConfig(),
    stored_programs: tuple[str, ...] = (),
    system_id: str = "enumerative_solver",
) -> IntelligentSystem:
    """A learning system: accumulates (input, feedback-grid) pairs in its
    state and synthesizes a fresh program from them on demand.

    State is a JSON byte string with the observed pairs plus any stored
    program texts, so metric oracles can reference its contents.
    """
    initial = json.dumps(
        {"pairs": [], "programs": list(stored_programs)}, separators=(",", ":")
    ).encode()

    def gen(state: bytes, rng) -> SkillProgram:
        doc = json.loads(state)
        pairs = doc["pairs"]
        if not pairs:
            return program_skill(Apply("identity"), name="blank")
        from .grid import grid_from_lists

        train = tuple(
            ExamplePair(grid_from_lists(i), grid_from_lists(o)) for i, o in pairs
        )
        mini = Task(id="online", train=train, test=train[:1])
        report = solve_task(mini, cfg)
        program = report.candidates[0].program if report.candidates else Apply("identity")
        return program_skill(program, name=serialize_program(program))

    def update(situation, response, feedback, state: bytes, rng) -> bytes:
        doc = json.loads(state)
        try:
            grid, _ = decode_situation(situation.payload)
            out = json.loads(feedback.payload)
            doc["pairs"].append([grid.tolists(), out])
        except Exception:
            pass  # non-grid feedback (e.g. correctness bits) adds nothing
        return json.dumps(doc, separators=(",", ":")).encode()

    return IntelligentSystem(
        initial_state=initial,
        skill_program_gen=gen,
        is_update=update,
        system_id=system_id,
    )


# ---------------------------------------------------------------------------
# Frequency-weighted coding


@dataclass(frozen=True)
class CodingTable:
    primitive_bits: tuple[tuple[str, float], ...]
    primitive_counts: tuple[tuple[str, int], ...]
    subtree_counts: tuple[tuple[str, int], ...]

    def as_dict(self) -> dict[str, float]:
        return dict(self.primitive_bits)


def mine_subprograms(reports: list[SolveReport]) -> CodingTable:
    """Count primitive and depth-2 subtree frequencies over winning
    candidates; code length is -log2 of the Laplace-smoothed frequency."""
    prim_counts: dict[str, int] = {}
    sub_counts: dict[str, int] = {}
    for report in reports:
        for cand in report.candidates:
            if not cand.consistent:
                continue
            stack = [cand.program]
            while stack:
                e = stack.pop()
                if isinstance(e, Literal):
                    continue
                prim_counts[e.name] = prim_counts.get(e.name, 0) + 1
                shape = (
                    "("
                    + " ".join(
                        [e.name]
                        + [a.name if isinstance(a, Apply) else "_" for a in e.args]
                    )
                    + ")"
                )
                if e.args:
                    sub_counts[shape] = sub_counts.get(shape, 0) + 1
                stack.extend(e.args)
    names = sorted(s.name for s in catalog())
    total = sum(prim_counts.get(n, 0) for n in names)
    denom = total + len(names)
    bits = tuple(
        (n, -math.log2((prim_counts.get(n, 0) + 1) / denom)) for n in names
    )
    return CodingTable(
        primitive_bits=bits,
        primitive_counts=tuple(sorted(prim_counts.items())),
        subtree_counts=tuple(sorted(sub_counts.items())),
    )


# ---------------------------------------------------------------------------
# Report persistence


def solve_report_doc(report: SolveReport) -> dict:
    return {
        "task_id": report.task_id,
        "candidates": [{"program": c.text, "dl": round(c.dl, 6)} for c in report.candidates],
        "predictions": [
            [g.tolists() for g in row] for row in report.predictions
        ],
        "nodes_evaluated": report.nodes_evaluated,
        "solved": report.solved,
    }


def write_solve_report(report: SolveReport, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{report.task_id}.solve.json"
    path.write_text(json.dumps(solve_report_doc(report), indent=None, separators=(",", ":")) + "\n")
    return path


def read_solve_report(path: str | Path) -> SolveReport:
    doc = json.loads(Path(path).read_text())
    from .grid import grid_from_lists

    candidates = [
        Candidate(program=parse_program(c["program"]), dl=float(c["dl"]))
        for c in doc["candidates"]
    ]
    predictions = [
        [grid_from_lists(g) for g in row] for row in doc["predictions"]
    ]
    return SolveReport(
        task_id=doc["task_id"],
        candidates=candidates,
        predictions=predictions,
        nodes_evaluated=int(doc["nodes_evaluated"]),
        wall_time=0.0,
        solved=doc.get("solved"),
    )


def summary_table(report: DatasetReport) -> str:
    lines = ["task_id\tsolved\tcandidates\tbest_dl\tnodes_evaluated"]
    for r in report.reports:
        best = f"{r.best_dl:.6f}" if r.best_dl is not None else "-"
        lines.append(
            f"{r.task_id}\t{int(bool(r.solved))}\t{len(r.candidates)}\t{best}\t{r.nodes_evaluated}"
        )
    lines.append(f"fraction_solved\t{report.fraction_solved:.6f}")
    return "\n".join(lines) + "\n"
