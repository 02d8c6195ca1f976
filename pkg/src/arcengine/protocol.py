"""Task / intelligent-system interaction protocol.

Abstract tasks expose situation generation, scoring, and state update
over opaque byte-string states; intelligent systems expose skill-program
generation and self-update. The training loop couples the two; the
evaluation loop runs a single frozen skill program and never touches the
system. The ARC adapter maps grid tasks into this formalism with the
3-trial, 1-bit-feedback evaluation rules.
"""

from __future__ import annotations

import base64
import json
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .errors import FormatError, SystemFailure
from .grid import Grid, grid_from_lists, grids_equal
from .taskio import Task

STOP = None  # situation generators return None to end a phase

DEFAULT_ABSTRACT_BUDGET = 10_000


@dataclass(frozen=True)
class Situation:
    payload: bytes


@dataclass(frozen=True)
class Response:
    payload: bytes


@dataclass(frozen=True)
class Feedback:
    """A binary string: ``payload`` bytes holding ``n_bits`` leading bits."""

    payload: bytes
    n_bits: int

    @staticmethod
    def bit(value: bool) -> "Feedback":
        return Feedback(b"\x01" if value else b"\x00", 1)

    @staticmethod
    def from_bytes(data: bytes) -> "Feedback":
        return Feedback(data, 8 * len(data))


@dataclass(frozen=True)
class AbstractTask:
    """Situation generation, scoring, and self-update over opaque state.

    All three procedures receive an explicit random source; stochastic
    tasks must draw only from it so runs replay exactly.
    """

    initial_state: bytes
    situation_gen: Callable[[bytes, random.Random], Situation | None]
    scoring: Callable[[Situation, Response, bytes, random.Random], tuple[float, Feedback]]
    task_update: Callable[[Response, bytes, random.Random], bytes]
    task_id: str = "abstract"


@dataclass(frozen=True)
class SkillProgram:
    """Frozen executable mapping situations to responses.

    ``program(situation, sp_state)`` returns (response, new state). ARC
    programs are stateless: they receive and return empty state.
    """

    program: Callable[[Situation, bytes], tuple[Response, bytes]]
    initial_state: bytes = b""
    name: str = "skill_program"


@dataclass(frozen=True)
class IntelligentSystem:
    """Skill-program generation plus self-update over opaque state."""

    initial_state: bytes
    skill_program_gen: Callable[[bytes, random.Random], SkillProgram]
    is_update: Callable[[Situation, Response, Feedback, bytes, random.Random], bytes]
    system_id: str = "system"


class InstrumentedSystem:
    """Counting wrapper used to prove evaluation-phase purity."""

    def __init__(self, inner: IntelligentSystem):
        self.inner = inner
        self.gen_calls = 0
        self.update_calls = 0

    @property
    def total_calls(self) -> int:
        return self.gen_calls + self.update_calls

    def as_system(self) -> IntelligentSystem:
        def gen(state, rng):
            self.gen_calls += 1
            return self.inner.skill_program_gen(state, rng)

        def update(situation, response, feedback, state, rng):
            self.update_calls += 1
            return self.inner.is_update(situation, response, feedback, state, rng)

        return IntelligentSystem(
            initial_state=self.inner.initial_state,
            skill_program_gen=gen,
            is_update=update,
            system_id=self.inner.system_id,
        )


@dataclass(frozen=True)
class TraceStep:
    t: int
    situation: bytes
    response: bytes
    feedback: bytes
    feedback_bits: int
    score: float


@dataclass(frozen=True)
class CurriculumTrace:
    steps: tuple[TraceStep, ...]
    task_id: str
    system_id: str
    seed: int

    def data_bytes(self, t: int) -> bytes:
        """Serialized (situation, response, feedback) for step t."""
        s = self.steps[t]
        return b"\x1e".join((s.situation, s.response, s.feedback))


@dataclass(frozen=True)
class EvaluationResult:
    per_situation_scores: tuple[float, ...]

    @property
    def total(self) -> float:
        return sum(self.per_situation_scores)


def run_training_phase(
    task: AbstractTask,
    system: IntelligentSystem,
    budget: int = DEFAULT_ABSTRACT_BUDGET,
    seed: int = 0,
) -> tuple[SkillProgram, CurriculumTrace]:
    """Run the six-step training loop until STOP or budget exhaustion.

    Returns the system's final skill program (generated once more from
    the post-curriculum state) and the full interaction trace.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = random.Random(seed)
    task_state = task.initial_state
    is_state = system.initial_state
    steps: list[TraceStep] = []
    for t in range(budget):
        situation = task.situation_gen(task_state, rng)
        if situation is STOP:
            break
        try:
            sp = system.skill_program_gen(is_state, rng)
            response, _ = sp.program(situation, sp.initial_state)
        except Exception as e:
            raise SystemFailure(f"system faulted at training step {t}: {e}") from e
        score, feedback = task.scoring(situation, response, task_state, rng)
        try:
            is_state = system.is_update(situation, response, feedback, is_state, rng)
        except Exception as e:
            raise SystemFailure(f"system update faulted at step {t}: {e}") from e
        task_state = task.task_update(response, task_state, rng)
        steps.append(
            TraceStep(t, situation.payload, response.payload, feedback.payload, feedback.n_bits, score)
        )
    try:
        final_sp = system.skill_program_gen(is_state, rng)
    except Exception as e:
        raise SystemFailure(f"system faulted generating final program: {e}") from e
    trace = CurriculumTrace(tuple(steps), task.task_id, system.system_id, seed)
    return final_sp, trace


def run_evaluation_phase(
    task: AbstractTask,
    sp: SkillProgram,
    budget: int = DEFAULT_ABSTRACT_BUDGET,
    seed: int = 0,
) -> EvaluationResult:
    """Run the evaluation loop with a frozen skill program.

    The intelligent system is never involved and feedback is discarded.
    A faulting program scores 0 on that situation and the loop continues.
    """
    rng = random.Random(seed)
    task_state = task.initial_state
    sp_state = sp.initial_state
    scores: list[float] = []
    for _ in range(budget):
        situation = task.situation_gen(task_state, rng)
        if situation is STOP:
            break
        try:
            response, sp_state = sp.program(situation, sp_state)
        except Exception:
            response = Response(b"")
        score, _feedback = task.scoring(situation, response, task_state, rng)
        scores.append(score)
        task_state = task.task_update(response, task_state, rng)
    return EvaluationResult(tuple(scores))


def skill(
    task: AbstractTask, sp: SkillProgram, n_runs: int = 1, seed: int = 0
) -> float:
    """Mean evaluation total over independently seeded evaluation phases."""
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    rng = random.Random(seed)
    totals = [
        run_evaluation_phase(task, sp, seed=rng.randrange(2**63)).total
        for _ in range(n_runs)
    ]
    return sum(totals) / n_runs


# ---------------------------------------------------------------------------
# ARC adapter


class ArcMode(Enum):
    TRAIN = "train"
    EVAL = "eval"

MAX_TRIALS = 3


def encode_situation(g: Grid, trial: int | None = None) -> bytes:
    doc: dict = {"grid": g.tolists()}
    if trial is not None:
        doc["trial"] = trial
    return json.dumps(doc, separators=(",", ":")).encode()


def decode_situation(payload: bytes) -> tuple[Grid, int | None]:
    try:
        doc = json.loads(payload)
        return grid_from_lists(doc["grid"]), doc.get("trial")
    except (KeyError, ValueError, TypeError) as e:
        raise FormatError(f"bad situation payload: {e}") from e


def encode_response(g: Grid) -> bytes:
    return json.dumps(g.tolists(), separators=(",", ":")).encode()


def decode_response(payload: bytes) -> Grid:
    try:
        return grid_from_lists(json.loads(payload))
    except (ValueError, TypeError) as e:
        raise FormatError(f"bad response payload: {e}") from e


def arc_adapter(task: Task, mode: ArcMode) -> AbstractTask:
    """Map a grid task onto the abstract protocol.

    Train mode: one situation per demonstration input, feedback carries
    the true output grid, per-situation score is exact-match.

    Eval mode: each test input is presented up to 3 times until answered
    correctly; feedback is a single correctness bit. The benchmark score
    is all-or-nothing: the final situation scores 1 only if every test
    example was answered within its trials, so the evaluation total
    equals the binary task score.
    """
    if mode is ArcMode.TRAIN:
        return _train_adapter(task)
    return _eval_adapter(task)


def _train_adapter(task: Task) -> AbstractTask:
    n = len(task.train)

    def situation_gen(state: bytes, rng: random.Random):
        i = json.loads(state)["i"]
        if i >= n:
            return STOP
        return Situation(encode_situation(task.train[i].input))

    def scoring(situation: Situation, response: Response, state: bytes, rng: random.Random):
        i = json.loads(state)["i"]
        expected = task.train[i].output
        try:
            score = 1.0 if grids_equal(decode_response(response.payload), expected) else 0.0
        except FormatError:
            score = 0.0
        return score, Feedback.from_bytes(encode_response(expected))

    def task_update(response: Response, state: bytes, rng: random.Random) -> bytes:
        doc = json.loads(state)
        doc["i"] += 1
        return json.dumps(doc, separators=(",", ":")).encode()

    return AbstractTask(
        initial_state=b'{"i":0}',
        situation_gen=situation_gen,
        scoring=scoring,
        task_update=task_update,
        task_id=task.id,
    )


def _eval_adapter(task: Task) -> AbstractTask:
    n = len(task.test)

    # State: example cursor, trial count for the current example, per-example
    # solved flags. The adapter is deterministic; rng is unused.
    initial = {"example": 0, "trial": 0, "solved": [False] * n}

    def _is_last_situation(doc) -> bool:
        return doc["example"] >= n

    def situation_gen(state: bytes, rng: random.Random):
        doc = json.loads(state)
        if _is_last_situation(doc):
            return STOP
        grid = task.test[doc["example"]].input
        return Situation(encode_situation(grid, trial=doc["trial"]))

    def scoring(situation: Situation, response: Response, state: bytes, rng: random.Random):
        doc = json.loads(state)
        i = doc["example"]
        expected = task.test[i].output
        try:
            correct = grids_equal(decode_response(response.payload), expected)
        except FormatError:
            correct = False
        last_trial = doc["trial"] + 1 >= MAX_TRIALS
        is_final = (i == n - 1) and (correct or last_trial)
        if is_final:
            all_solved = all(doc["solved"][:i]) and correct if i else correct
            score = 1.0 if all_solved else 0.0
        else:
            score = 0.0
        return score, Feedback.bit(correct)

    def task_update(response: Response, state: bytes, rng: random.Random) -> bytes:
        doc = json.loads(state)
        i = doc["example"]
        if i < n:
            expected = task.test[i].output
            try:
                correct = grids_equal(decode_response(response.payload), expected)
            except FormatError:
                correct = False
            if correct:
                doc["solved"][i] = True
                doc["example"] += 1
                doc["trial"] = 0
            else:
                doc["trial"] += 1
                if doc["trial"] >= MAX_TRIALS:
                    doc["example"] += 1
                    doc["trial"] = 0
        return json.dumps(doc, separators=(",", ":")).encode()

    return AbstractTask(
        initial_state=json.dumps(initial, separators=(",", ":")).encode(),
        situation_gen=situation_gen,
        scoring=scoring,
        task_update=task_update,
        task_id=task.id,
    )


def make_constant_program(g: Grid, name: str = "constant") -> SkillProgram:
    def program(situation: Situation, state: bytes):
        return Response(encode_response(g)), state

    return SkillProgram(program=program, name=name)


def make_grid_function_program(fn: Callable[[Grid], Grid], name: str = "grid_fn") -> SkillProgram:
    """Stateless program applying a pure grid function to each situation."""

    def program(situation: Situation, state: bytes):
        grid, _trial = decode_situation(situation.payload)
        return Response(encode_response(fn(grid))), state

    return SkillProgram(program=program, name=name)


def make_trial_sequenced_program(
    answers: Callable[[Grid, int], Grid], name: str = "trial_sequenced"
) -> SkillProgram:
    """Stateless program that picks its answer from the situation's trial
    index (the adapter re-presents a test input with an incremented trial
    counter after each wrong attempt)."""

    def program(situation: Situation, state: bytes):
        grid, trial = decode_situation(situation.payload)
        return Response(encode_response(answers(grid, trial or 0))), state

    return SkillProgram(program=program, name=name)


# ---------------------------------------------------------------------------
# Trace persistence


def write_trace(trace: CurriculumTrace) -> str:
    """Line format: header then ``t<TAB>situation-b64<TAB>response-b64<TAB>
    feedback-b64<TAB>score`` per step."""
    lines = [f"trace\t{trace.task_id}\t{trace.system_id}\t{trace.seed}"]
    for s in trace.steps:
        lines.append(
            "\t".join(
                (
                    str(s.t),
                    base64.b64encode(s.situation).decode(),
                    base64.b64encode(s.response).decode(),
                    base64.b64encode(s.feedback).decode() + f":{s.feedback_bits}",
                    repr(s.score),
                )
            )
        )
    return "\n".join(lines) + "\n"


def read_trace(text: str) -> CurriculumTrace:
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or not lines[0].startswith("trace\t"):
        raise FormatError("missing trace header")
    _, task_id, system_id, seed = lines[0].split("\t")
    steps = []
    for ln in lines[1:]:
        t, s_b64, r_b64, f_field, score = ln.split("\t")
        f_b64, bits = f_field.rsplit(":", 1)
        steps.append(
            TraceStep(
                int(t),
                base64.b64decode(s_b64),
                base64.b64decode(r_b64),
                base64.b64decode(f_b64),
                int(bits),
                float(score),
            )
        )
    if [s.t for s in steps] != list(range(len(steps))):
        raise FormatError("trace step indices must be consecutive from 0")
    return CurriculumTrace(tuple(steps), task_id, system_id, int(seed))
