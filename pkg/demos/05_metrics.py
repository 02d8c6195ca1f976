"""Skill-acquisition metrics: complexity proxies, GD, priors, experience.

All complexity values are budget-bounded upper-bound proxies (the true
quantities are uncomputable); reports embed the oracle configuration.

Run: python demos/05_metrics.py
"""

import json

from arcengine.dsl import description_length, parse_program, serialize_program
from arcengine.metrics import (
    ComplexityOracle,
    CurriculumMetrics,
    OracleKind,
    SolutionPair,
    TaskInputs,
    complexity,
    developer_aware_gd,
    generalization_difficulty,
    intelligence_score,
    priors_measure,
    relative_complexity,
)

oracle = ComplexityOracle()
print("oracle:", oracle.descriptor())
print()

# Complexity: never more than the program's own description length, and a
# redundant wrapper collapses to its behavioral core.
p = parse_program("(flip_h (flip_h (rotate90 identity)))")
print(f"description length: {description_length(p):.2f} bits")
print(f"complexity proxy:   {complexity(p, oracle):.2f} bits  (involution collapsed)")
print()

# Relative complexity: edits in a delta language over the given program.
a = parse_program("(replace_color identity 1 2)")
b = parse_program("(replace_color identity 1 3)")
print(f"H(b|a) one literal apart: {relative_complexity(b, a, oracle):.2f} bits")
print(f"H(a|a):                   {relative_complexity(a, a, oracle):.2f} bits")
print()

# Generalization difficulty: what fraction of the solution the shortest
# training-consistent program fails to explain.
sol = parse_program("(rotate90 identity)")
same = parse_program("(compose identity (rotate90 identity))")
unrelated = parse_program("(replace_color identity 1 2)")
print("GD, training solution behaviorally identical:",
      generalization_difficulty(SolutionPair(sol, same), oracle).value)
print("GD, unrelated training solution:",
      generalization_difficulty(SolutionPair(sol, unrelated), oracle).value)

snapshot = json.dumps({"programs": [serialize_program(sol)]}).encode()
print("developer-aware GD with the solution stored in the system:",
      developer_aware_gd(SolutionPair(sol, unrelated), snapshot, oracle).value)
print("priors with that snapshot:",
      priors_measure(snapshot, sol, 1.0, oracle).value)
print()

# The aggregate score: value-weighted mean of GD / (priors + experience).
tasks = [
    TaskInputs("demo", 1.0, (CurriculumMetrics(p_c=1.0, gd_dev_aware=0.5,
                                               priors=0.25, experience=0.25),)),
]
print("intelligence score for GD=0.5, P=0.25, E=0.25:",
      intelligence_score(tasks).score)

compressor = ComplexityOracle(kind=OracleKind.COMPRESSOR)
print("compressor oracle on raw bytes:", complexity(b"some raw trace bytes", compressor), "bits")
