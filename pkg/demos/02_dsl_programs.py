"""The core-knowledge DSL: catalog, programs, evaluation, description length.

Run: python demos/02_dsl_programs.py
"""

from collections import Counter

from arcengine.dsl import (
    catalog,
    catalog_version,
    description_length,
    eval_program,
    parse_program,
    serialize_program,
    uniform_code_length,
)
from arcengine.grid import grid_from_lists


def show(g):
    for row in g.tolists():
        print(" ".join(str(v) for v in row))
    print()


# The catalog realizes the four prior categories plus plumbing.
cats = Counter(s.category.value for s in catalog())
print(f"catalog {catalog_version()}: {len(catalog())} primitives")
for name, count in sorted(cats.items()):
    print(f"  {name}: {count}")
print(f"uniform node cost: {uniform_code_length():.3f} bits")
print()

# Programs are prefix expressions over the implicit input grid; `identity`
# is the leaf meaning "the input grid itself".
g = grid_from_lists([[0, 0, 0], [1, 2, 0], [1, 0, 0]])
print("input:")
show(g)

for text in (
    "identity",
    "(flip_h identity)",
    "(rotate90 identity)",
    "(replace_color identity 1 5)",
    "(tile identity 2 2)",
    "(object_view (largest_object (segment identity)))",
    "(compose (flip_h identity) (replace_color identity 2 9))",
):
    program = parse_program(text)
    out = eval_program(program, g)
    print(f"{text}   [{description_length(program):.2f} bits]")
    show(out)

# Round-tripping through the canonical text form is exact.
p = parse_program("(mask_xor (left_half identity) (right_half identity) 3)")
assert parse_program(serialize_program(p)) == p
print("canonical form:", serialize_program(p))
