"""Grids, background inference, and object segmentation.

Run: python demos/01_grids_and_objects.py
"""

from arcengine.grid import (
    Connectivity,
    ConnectivityMode,
    grid_from_lists,
    infer_background,
    new_grid,
    segment_objects,
)


def show(g):
    for row in g.tolists():
        print(" ".join(str(v) for v in row))
    print()


# A grid is a rectangle of symbols 0-9, between 1x1 and 30x30.
g = grid_from_lists(
    [
        [0, 0, 0, 0, 0, 0],
        [0, 1, 1, 0, 2, 0],
        [0, 1, 0, 0, 2, 0],
        [0, 0, 0, 0, 2, 0],
        [5, 0, 3, 3, 0, 0],
    ]
)
print("input grid:")
show(g)

print("inferred background symbol:", infer_background(g))
print()

# Segmentation follows the objectness prior: connected components of
# non-background cells. Same-color 4-connectivity is the default.
for mode in (ConnectivityMode.SAME_COLOR_4, ConnectivityMode.MULTICOLOR_8):
    objs = segment_objects(g, Connectivity(mode))
    print(f"{mode.value}: {len(objs)} objects")
    for o in objs:
        print(f"  anchor={o.anchor} size={o.size} colors={sorted(o.colors())}")
    print()

# Everything is immutable; a uniform canvas comes from new_grid.
canvas = new_grid(3, 4, 7)
print("3x4 canvas of 7s:")
show(canvas)
