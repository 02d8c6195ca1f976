"""Skill-acquisition metrics over budget-bounded complexity proxies.

True algorithmic complexity is uncomputable; every quantity here is an
explicit, deterministic upper-bound proxy: either the minimal catalog
program found within a search budget, or a fixed compressor's output
size. Reports embed the full oracle configuration because all values are
oracle- and catalog-relative.
"""

from __future__ import annotations

import json
import lzma
import zlib
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

from .dsl.interp import EvalBudget, eval_program
from .dsl.lang import (
    Apply,
    DslType,
    Literal,
    Program,
    catalog,
    catalog_version,
    description_length,
    parse_program,
    serialize_program,
    subtrees,
    type_check,
    uniform_code_length,
)
from .errors import BudgetExceeded, DegenerateSolution, EmptyScope, EvalError, ParseError
from .grid import Grid, grid_from_lists
from .protocol import CurriculumTrace

EPSILON_EXPOSURE = 1e-6  # minimum priors+experience for a curriculum term

_PROBE_BUDGET = EvalBudget(max_nodes_evaluated=50_000, max_cells_touched=5_000_000)
_SEP = b"\x00\x1d\x00"


class OracleKind(Enum):
    MIN_DSL_LENGTH = "min_dsl_length"
    COMPRESSOR = "compressor"


def default_probe_grids() -> tuple[Grid, ...]:
    """Fixed probe inputs used to witness behavioral equivalence."""
    return (
        grid_from_lists([[0, 1, 2], [3, 4, 5], [6, 7, 8]]),
        grid_from_lists([[1, 0, 0, 2], [0, 3, 3, 0]]),
        grid_from_lists([[0, 0, 0, 0], [0, 5, 5, 0], [0, 5, 0, 0], [2, 0, 0, 1]]),
    )


@dataclass(frozen=True)
class ComplexityOracle:
    kind: OracleKind = OracleKind.MIN_DSL_LENGTH
    search_budget: int = 600  # behavioral-equivalent variants examined
    compressor_id: str = "zlib"
    compressor_level: int = 9
    probe_grids: tuple[Grid, ...] = field(default_factory=default_probe_grids)
    ref_cost_bits: float = 4.0  # one "reuse subtree" reference
    opcode_bits: float = 2.0  # one edit opcode
    catalog: str = field(default_factory=catalog_version)

    def descriptor(self) -> str:
        return (
            f"kind={self.kind.value} search_budget={self.search_budget} "
            f"compressor={self.compressor_id}:{self.compressor_level} "
            f"ref_cost={self.ref_cost_bits} opcode={self.opcode_bits} "
            f"catalog={self.catalog}"
        )


class MetricValue(NamedTuple):
    value: float
    clamped: bool

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class SolutionPair:
    sol: Program  # evaluation-phase solution
    train_sol: Program  # shortest found training-consistent program
    theta: float = 1.0


def _compress_bits(data: bytes, o: ComplexityOracle) -> float:
    if o.compressor_id == "lzma":
        return 8.0 * len(lzma.compress(data, preset=o.compressor_level))
    return 8.0 * len(zlib.compress(data, o.compressor_level))


def _probe_signature(p: Program, o: ComplexityOracle):
    """Outputs on the probe grids; None marks a failed evaluation."""
    return _probe_signature_cached(p, o.probe_grids)


@lru_cache(maxsize=1 << 15)
def _probe_signature_cached(p: Program, probes: tuple[Grid, ...]):
    sig = []
    for g in probes:
        try:
            sig.append(eval_program(p, g, _PROBE_BUDGET, validate=False))
        except (EvalError, BudgetExceeded):
            sig.append(None)
    return tuple(sig)


def _behaviorally_equal(a: Program, b: Program, o: ComplexityOracle) -> bool:
    if a == b:
        return True
    sig_a = _probe_signature(a, o)
    if all(g is None for g in sig_a):
        return False
    return sig_a == _probe_signature(b, o)


def complexity(x: bytes | Program, o: ComplexityOracle) -> float:
    """Bits needed to describe ``x`` under the oracle: always an upper
    bound on the true value, never increasing as the budget grows."""
    if isinstance(x, (bytes, bytearray)):
        return _compress_bits(bytes(x), o)
    if o.kind is OracleKind.COMPRESSOR:
        return _compress_bits(serialize_program(x).encode(), o)
    own = description_length(x)
    best = own
    target_sig = _probe_signature(x, o)
    if any(g is not None for g in target_sig):
        for variant, cost in _cheaper_equivalents(x, own, o):
            if cost < best and _probe_signature(variant, o) == target_sig:
                best = cost
    return best


def _cheaper_equivalents(x: Program, own_dl: float, o: ComplexityOracle, max_depth: int = 3):
    """Deterministic stream of edit-reachable variants of ``x``.

    Breadth-first over edit sequences (substitutions and elisions never
    grow a program, so the space is bounded); a fixed order truncated by
    the search budget, so a larger budget examines a superset
    (monotonicity by construction).
    """
    count = 0
    seen = {serialize_program(x)}
    frontier = [x]
    for _level in range(max_depth):
        nxt: list[Program] = []
        for base in frontier:
            for variant in _single_edits(base):
                if count >= o.search_budget:
                    return
                count += 1
                text = serialize_program(variant)
                if text in seen:
                    continue
                seen.add(text)
                nxt.append(variant)
                dl = description_length(variant)
                if dl < own_dl:
                    yield variant, dl
        if not nxt:
            return
        frontier = nxt


def _single_edits(p: Program):
    """All programs one edit away: node elisions (a grid-typed node
    replaced by one of its grid children), literal substitutions, and
    same-signature primitive swaps, in that deterministic order."""
    prims = {s.name: s for s in catalog()}

    def rebuild(e, path, new):
        if not path:
            return new
        i, rest = path[0], path[1:]
        args = list(e.args)
        args[i] = rebuild(args[i], rest, new)
        return Apply(e.name, tuple(args))

    def elisions(e, path):
        if isinstance(e, Literal):
            return
        spec = prims[e.name]
        if spec.arity >= 1 and spec.ret_type is DslType.GRID:
            for a in e.args:
                if isinstance(a, Apply) and prims[a.name].ret_type is DslType.GRID:
                    yield path, a
        for i, a in enumerate(e.args):
            yield from elisions(a, path + (i,))

    def substitutions(e, path):
        if isinstance(e, Literal):
            if e.kind in (DslType.COLOR, DslType.INT):
                for v in range(10):
                    if v != e.value:
                        yield path, Literal(e.kind, v)
            elif e.kind is DslType.DIRECTION:
                from .dsl.lang import Direction

                for d in Direction:
                    if d is not e.value:
                        yield path, Literal(e.kind, d)
            return
        spec = prims[e.name]
        for other in sorted(prims.values(), key=lambda s: s.name):
            if (
                other.name != e.name
                and other.arg_types == spec.arg_types
                and other.ret_type == spec.ret_type
                and other.special is None
            ):
                yield path, Apply(other.name, e.args)
        for i, a in enumerate(e.args):
            yield from substitutions(a, path + (i,))

    for source in (elisions, substitutions):
        for path, new in source(p, ()):
            candidate = rebuild(p, path, new)
            if type_check(candidate):
                yield candidate


def _extract_programs(data: bytes) -> tuple[Program, ...]:
    """Parseable catalog programs referenced by a conditioning byte string.

    Accepts a JSON container with a ``programs`` list, or a raw text scan
    of lines; anything unparseable is ignored.
    """
    found: list[Program] = []
    text = data.decode("utf-8", errors="replace")
    try:
        doc = json.loads(text)
        if isinstance(doc, dict) and isinstance(doc.get("programs"), list):
            for t in doc["programs"]:
                try:
                    found.append(parse_program(str(t)))
                except ParseError:
                    pass
            return tuple(found)
    except ValueError:
        pass
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("(") or line in {s.name for s in catalog()}:
            try:
                found.append(parse_program(line))
            except ParseError:
                pass
    return tuple(found)


def _build_cost(target, reuse: set, o: ComplexityOracle, costs: dict) -> float:
    if isinstance(target, Literal):
        return o.opcode_bits + target.bits()
    if target in reuse:
        return o.opcode_bits + o.ref_cost_bits
    c = o.opcode_bits + costs[target.name]
    for a in target.args:
        c += _build_cost(a, reuse, o, costs)
    return c


def relative_complexity(
    target: Program | bytes,
    given: Program | bytes | None,
    o: ComplexityOracle,
    extra_material: tuple[Program, ...] = (),
) -> float:
    """Bits to describe ``target`` given ``given`` (and optional extra
    referenceable material): edit cost in the AST delta language for the
    program oracle, compression gain for the compressor oracle. >= 0;
    conditioning on nothing costs exactly ``complexity(target)``."""
    if o.kind is OracleKind.COMPRESSOR or isinstance(target, (bytes, bytearray)):
        t_bytes = (
            bytes(target)
            if isinstance(target, (bytes, bytearray))
            else serialize_program(target).encode()
        )
        g_bytes = _conditioning_bytes(given, extra_material)
        if not g_bytes:
            return complexity(target, o)
        joint = _compress_bits(g_bytes + _SEP + t_bytes, o)
        return max(0.0, joint - _compress_bits(g_bytes, o))

    given_prog: Program | None = None
    material: list[Program] = list(extra_material)
    if isinstance(given, (bytes, bytearray)):
        material.extend(_extract_programs(bytes(given)))
        given_prog = material[0] if material else None
    else:
        given_prog = given
        if given_prog is not None:
            material.insert(0, given_prog)

    if not material:
        return complexity(target, o)

    for m in material:
        if m == target or _behaviorally_equal(target, m, o):
            return 0.0

    costs = {s.name: s.code_length for s in catalog()}
    reuse: set = set()
    for m in material:
        reuse |= subtrees(m)
    best = _build_cost(target, reuse, o, costs)

    scratch = o.opcode_bits + complexity(target, o)
    best = min(best, scratch)

    if given_prog is not None:
        target_sig = _probe_signature(target, o)
        if any(g is not None for g in target_sig):
            count = 0
            for variant in _single_edits(given_prog):
                if count >= o.search_budget:
                    break
                count += 1
                if _probe_signature(variant, o) == target_sig:
                    best = min(best, o.opcode_bits + _edit_content_bits(variant, given_prog))
    return max(0.0, best)


def _edit_content_bits(variant: Program, base: Program) -> float:
    """Content cost of the single differing node between two programs."""
    costs = {s.name: s.code_length for s in catalog()}

    def diff(a, b) -> float | None:
        if a == b:
            return None
        if isinstance(a, Literal) or isinstance(b, Literal):
            if isinstance(a, Literal):
                return a.bits()
            return costs[a.name]
        if a.name != b.name or len(a.args) != len(b.args):
            return costs[a.name]
        for x, y in zip(a.args, b.args):
            d = diff(x, y)
            if d is not None:
                return d
        return None

    d = diff(variant, base)
    return d if d is not None else 0.0


def _conditioning_bytes(given, extra: tuple[Program, ...]) -> bytes:
    parts: list[bytes] = []
    if isinstance(given, (bytes, bytearray)) and given:
        parts.append(bytes(given))
    elif given is not None and not isinstance(given, (bytes, bytearray)):
        parts.append(serialize_program(given).encode())
    parts.extend(serialize_program(m).encode() for m in extra)
    return _SEP.join(parts)


# ---------------------------------------------------------------------------
# Metric definitions


def _ratio(num: float, den: float) -> MetricValue:
    v = num / den
    if v < 0.0:
        return MetricValue(0.0, True)
    if v > 1.0:
        return MetricValue(1.0, True)
    return MetricValue(v, False)


def _solution_complexity(sol: Program, o: ComplexityOracle) -> float:
    c = complexity(sol, o)
    if c <= 0.0:
        raise DegenerateSolution("solution has zero complexity")
    return c


def generalization_difficulty(sp: SolutionPair, o: ComplexityOracle) -> MetricValue:
    """Fraction of the solution's complexity not explained by the shortest
    training-consistent program."""
    c = _solution_complexity(sp.sol, o)
    return _ratio(relative_complexity(sp.sol, sp.train_sol, o), c)


def developer_aware_gd(
    sp: SolutionPair, system_snapshot: bytes, o: ComplexityOracle
) -> MetricValue:
    """As generalization_difficulty, but the edit oracle may also reference
    material stored in the initial system snapshot."""
    c = _solution_complexity(sp.sol, o)
    extra = _extract_programs(system_snapshot) if system_snapshot else ()
    return _ratio(relative_complexity(sp.sol, sp.train_sol, o, extra_material=extra), c)


def priors_measure(
    system_snapshot: bytes, sol: Program, theta: float, o: ComplexityOracle
) -> MetricValue:
    """Fraction of the solution's complexity explained by the initial system."""
    c = _solution_complexity(sol, o)
    return _ratio(c - relative_complexity(sol, system_snapshot, o), c)


def experience_measure(
    trace: CurriculumTrace,
    system_snapshots: list[bytes],
    sol: Program,
    o: ComplexityOracle,
) -> float:
    """Relevant novel information about the solution accrued per step,
    summed and normalized; redundant steps contribute nothing."""
    if len(system_snapshots) != len(trace.steps):
        raise ValueError("one snapshot per trace step is required")
    c = _solution_complexity(sol, o)
    total = 0.0
    for t, snap in enumerate(system_snapshots):
        before = relative_complexity(sol, snap, o)
        after = relative_complexity(sol, snap + _SEP + trace.data_bytes(t), o)
        total += max(0.0, before - after)
    return total / c


@dataclass(frozen=True)
class CurriculumMetrics:
    p_c: float  # empirical probability of this curriculum
    gd_dev_aware: float
    priors: float
    experience: float
    gd: float = 0.0  # system-centric value, reported alongside
    clamped: bool = False
    curriculum_id: str = ""


@dataclass(frozen=True)
class TaskInputs:
    task_id: str
    omega_theta: float  # value weight omega_T * theta_T (1.0 for ARC)
    curricula: tuple[CurriculumMetrics, ...]


@dataclass(frozen=True)
class TaskOutcome:
    inputs: TaskInputs
    contribution: float
    excluded_curricula: int
    all_degenerate: bool


@dataclass(frozen=True)
class IntelligenceReport:
    per_task: tuple[TaskOutcome, ...]
    score: float
    oracle: str
    catalog: str

    def recompute_score(self) -> float:
        return _average([t.contribution for t in self.per_task])


def _average(xs: list[float]) -> float:
    return sum(xs) / len(xs)


def intelligence_score(
    tasks: list[TaskInputs],
    oracle: ComplexityOracle | None = None,
    epsilon: float = EPSILON_EXPOSURE,
) -> IntelligenceReport:
    """Value-weighted mean over tasks of the expected ratio
    GD / (priors + experience); curricula whose total exposure falls
    below ``epsilon`` are excluded and reported rather than divided by."""
    if not tasks:
        raise EmptyScope("no tasks in scope")
    outcomes: list[TaskOutcome] = []
    for task in tasks:
        total = 0.0
        excluded = 0
        usable = 0
        for cur in task.curricula:
            exposure = cur.priors + cur.experience
            if exposure < epsilon:
                excluded += 1
                continue
            usable += 1
            total += cur.p_c * (cur.gd_dev_aware / exposure)
        contribution = task.omega_theta * total if usable else 0.0
        outcomes.append(
            TaskOutcome(
                inputs=task,
                contribution=contribution,
                excluded_curricula=excluded,
                all_degenerate=usable == 0 and bool(task.curricula),
            )
        )
    o = oracle if oracle is not None else ComplexityOracle()
    return IntelligenceReport(
        per_task=tuple(outcomes),
        score=_average([t.contribution for t in outcomes]),
        oracle=o.descriptor(),
        catalog=o.catalog,
    )


def task_metrics_from_programs(
    task_id: str,
    sp: SolutionPair,
    trace: CurriculumTrace,
    system_snapshots: list[bytes],
    o: ComplexityOracle,
    omega_theta: float = 1.0,
    p_c: float = 1.0,
) -> TaskInputs:
    """Compute one task's full metric row from its solution pair and
    recorded curriculum."""
    snapshot0 = system_snapshots[0] if system_snapshots else b""
    gd = generalization_difficulty(sp, o)
    gdd = developer_aware_gd(sp, snapshot0, o)
    pri = priors_measure(snapshot0, sp.sol, sp.theta, o)
    exp = experience_measure(trace, system_snapshots, sp.sol, o)
    cur = CurriculumMetrics(
        p_c=p_c,
        gd_dev_aware=gdd.value,
        priors=pri.value,
        experience=exp,
        gd=gd.value,
        clamped=gd.clamped or gdd.clamped or pri.clamped,
        curriculum_id=f"{trace.task_id}:{trace.seed}",
    )
    return TaskInputs(task_id=task_id, omega_theta=omega_theta, curricula=(cur,))


# ---------------------------------------------------------------------------
# Report file format


def write_intelligence_report(report: IntelligenceReport, path: str | Path) -> None:
    lines = [
        "# intelligence-report",
        f"# oracle: {report.oracle}",
        f"# catalog: {report.catalog}",
        "# columns: task_id\tcurriculum_id\tp_c\tgd\tgd_dev_aware\tpriors\texperience\tomega_theta\tclamped\texcluded",
    ]
    for t in report.per_task:
        if not t.inputs.curricula:
            lines.append(f"{t.inputs.task_id}\t-\t0\t0\t0\t0\t0\t{t.inputs.omega_theta!r}\t0\t0")
            continue
        for cur in t.inputs.curricula:
            lines.append(
                "\t".join(
                    (
                        t.inputs.task_id,
                        cur.curriculum_id or "-",
                        repr(cur.p_c),
                        repr(cur.gd),
                        repr(cur.gd_dev_aware),
                        repr(cur.priors),
                        repr(cur.experience),
                        repr(t.inputs.omega_theta),
                        str(int(cur.clamped)),
                        str(t.excluded_curricula),
                    )
                )
            )
    lines.append(f"score\t{report.score!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_intelligence_report(path: str | Path) -> IntelligenceReport:
    oracle = ""
    catalog_v = ""
    rows: dict[str, list[CurriculumMetrics]] = {}
    omegas: dict[str, float] = {}
    score = 0.0
    for line in Path(path).read_text().splitlines():
        if line.startswith("# oracle: "):
            oracle = line[len("# oracle: ") :]
        elif line.startswith("# catalog: "):
            catalog_v = line[len("# catalog: ") :]
        elif line.startswith("#") or not line:
            continue
        elif line.startswith("score\t"):
            score = float(line.split("\t")[1])
        else:
            (tid, cid, p_c, gd, gdd, pri, exp, omega, clamped, _excl) = line.split("\t")
            omegas[tid] = float(omega)
            rows.setdefault(tid, [])
            if cid != "-" or float(p_c) > 0:
                rows[tid].append(
                    CurriculumMetrics(
                        p_c=float(p_c),
                        gd_dev_aware=float(gdd),
                        priors=float(pri),
                        experience=float(exp),
                        gd=float(gd),
                        clamped=clamped == "1",
                        curriculum_id=cid if cid != "-" else "",
                    )
                )
    tasks = [
        TaskInputs(task_id=tid, omega_theta=omegas[tid], curricula=tuple(curs))
        for tid, curs in rows.items()
    ]
    report = intelligence_score(tasks)
    return replace(report, score=score, oracle=oracle, catalog=catalog_v)
