"""Training and evaluation phases over the abstract task protocol.

A task is situation generation + scoring + state update over opaque
state; an intelligent system generates skill programs and updates itself
on feedback. Training couples the two; evaluation runs a frozen program
and never calls the system.

Run: python demos/04_protocol_loops.py
"""

from arcengine.mocks import build_mock_corpus
from arcengine.protocol import (
    ArcMode,
    arc_adapter,
    run_evaluation_phase,
    run_training_phase,
    skill,
    write_trace,
)
from arcengine.synthesis import SearchConfig, synthesis_system

task = build_mock_corpus().by_id("mock02_recolor")
print(f"task {task.id}: {len(task.train)} demonstrations, {len(task.test)} test examples")

# Training: the adapter presents each demonstration input; feedback is the
# true output grid; the system accumulates pairs and re-synthesizes.
system = synthesis_system(SearchConfig(node_budget=50_000))
final_program, trace = run_training_phase(
    arc_adapter(task, ArcMode.TRAIN), system, budget=10, seed=7
)
print(f"training recorded {len(trace.steps)} steps; scores per step:",
      [s.score for s in trace.steps])
print(f"final skill program: {final_program.name}")
print()

# Evaluation: frozen program, up to 3 trials per test input, 1-bit
# feedback (discarded), all-or-nothing task score.
result = run_evaluation_phase(arc_adapter(task, ArcMode.EVAL), final_program, budget=20)
print("evaluation situations:", len(result.per_situation_scores), "total:", result.total)
print("skill (mean over evaluation phases):",
      skill(arc_adapter(task, ArcMode.EVAL), final_program, n_runs=5, seed=1))
print()

# Traces persist in a line format and replay byte-identically.
text = write_trace(trace)
print("trace header:", text.splitlines()[0])
_, again = run_training_phase(
    arc_adapter(task, ArcMode.TRAIN),
    synthesis_system(SearchConfig(node_budget=50_000)),
    budget=10,
    seed=7,
)
assert write_trace(again) == text
print("fixed-seed replay is byte-identical")
