"""Curated mock corpus: small hand-authored tasks with known solutions.

Each task is pinned to an intended catalog program; demonstration outputs
are produced by evaluating that program, so consistency holds by
construction. Demonstration inputs are chosen to rule out cheaper
look-alike transforms (verified by the solver test suite).
"""

from __future__ import annotations

from pathlib import Path

from .dsl import eval_program, parse_program
from .grid import Grid, grid_from_lists
from .taskio import Dataset, ExamplePair, Split, Task, serialize_task


def _task(task_id: str, program_text: str, train_inputs, test_inputs) -> Task:
    prog = parse_program(program_text)
    train = tuple(
        ExamplePair(g, eval_program(prog, g))
        for g in map(grid_from_lists, train_inputs)
    )
    test = tuple(
        ExamplePair(g, eval_program(prog, g))
        for g in map(grid_from_lists, test_inputs)
    )
    return Task(id=task_id, train=train, test=test)


_SPECS: list[tuple[str, str, list, list]] = [
    (
        "mock01_identity",
        "identity",
        [
            [[1, 2], [3, 4]],
            [[0, 5, 0], [5, 0, 5]],
            [[7]],
        ],
        [[[3, 3, 1], [0, 2, 0]]],
    ),
    (
        "mock02_recolor",
        "(replace_color identity 1 2)",
        [
            [[1, 0], [0, 1]],
            [[1, 1, 3]],
            [[4, 1, 0], [1, 0, 4]],
        ],
        [[[1, 3], [0, 1]]],
    ),
    (
        "mock03_flip_h",
        "(flip_h identity)",
        [
            [[1, 2, 0], [0, 3, 0]],
            [[5, 0], [1, 2]],
            [[1, 0, 9], [4, 4, 0]],
        ],
        [[[6, 1], [0, 2]]],
    ),
    (
        "mock04_flip_v",
        "(flip_v identity)",
        [
            [[1, 2], [0, 0], [3, 0]],
            [[5, 5, 0], [0, 1, 2]],
            [[7], [0], [2]],
        ],
        [[[1, 0], [2, 2], [0, 3]]],
    ),
    (
        "mock05_rotate90",
        "(rotate90 identity)",
        [
            [[1, 2, 3], [0, 0, 4]],
            [[5, 0], [1, 2], [0, 0]],
            [[1], [2]],
        ],
        [[[2, 0, 0], [1, 1, 3]]],
    ),
    (
        "mock06_rotate180",
        "(rotate180 identity)",
        [
            [[1, 2, 3], [0, 0, 4]],
            [[5, 0], [1, 2], [3, 0]],
            [[1, 2]],
        ],
        [[[0, 7], [2, 0], [0, 1]]],
    ),
    (
        "mock07_transpose",
        "(transpose identity)",
        [
            [[1, 2, 3], [0, 5, 4]],
            [[5, 0], [1, 2], [0, 6]],
            [[9, 1]],
        ],
        [[[2, 0, 0], [3, 1, 4]]],
    ),
    (
        "mock08_tile_2x2",
        "(tile identity 2 2)",
        [
            [[1, 0], [0, 2]],
            [[3, 1, 0]],
            [[5], [0], [6]],
        ],
        [[[2, 4], [0, 1]]],
    ),
    (
        "mock09_tile_row",
        "(tile identity 1 3)",
        [
            [[4], [1]],
            [[2, 0], [0, 7]],
            [[1, 5, 0]],
        ],
        [[[3, 0], [0, 8]]],
    ),
    (
        "mock10_scale_up",
        "(scale_up identity 2)",
        [
            [[1, 2]],
            [[3, 0], [0, 4]],
            [[5], [6]],
        ],
        [[[2, 0], [1, 7]]],
    ),
    (
        "mock11_scale_down",
        "(scale_down identity 2)",
        [
            [[1, 1, 2, 2], [1, 1, 2, 2]],
            [[3, 3], [3, 3], [0, 0], [0, 0]],
            [[5, 5, 0, 0], [5, 5, 0, 0], [0, 0, 7, 7], [0, 0, 7, 7]],
        ],
        [[[4, 4, 1, 1], [4, 4, 1, 1]]],
    ),
    (
        "mock12_crop_content",
        "(crop_to_content identity)",
        [
            [[0, 0, 0, 0], [0, 1, 2, 0], [0, 0, 3, 0], [0, 0, 0, 0]],
            [[0, 0, 0], [0, 5, 0], [0, 5, 5]],
            [[0, 0], [7, 0]],
        ],
        [[[0, 0, 0, 0], [0, 0, 6, 1], [0, 0, 0, 1], [0, 0, 0, 0]]],
    ),
    (
        "mock13_symmetry_h",
        "(symmetrize_h identity)",
        [
            [[1, 2, 0, 0], [0, 3, 0, 0]],
            [[5, 0, 0, 0], [5, 1, 0, 0], [0, 1, 0, 0]],
            [[2, 0, 0, 0, 0, 0], [2, 4, 4, 0, 0, 0]],
        ],
        [[[9, 1, 0, 0], [0, 8, 0, 0], [3, 0, 0, 0]]],
    ),
    (
        "mock14_symmetry_v",
        "(symmetrize_v identity)",
        [
            [[1, 2], [0, 3], [0, 0], [0, 0]],
            [[5, 0, 1], [0, 6, 0], [0, 0, 0], [0, 0, 0]],
            [[2, 2, 0], [0, 4, 0], [0, 0, 0], [0, 0, 0]],
        ],
        [[[1, 0, 7], [0, 5, 0], [0, 0, 0], [0, 0, 0]]],
    ),
    (
        "mock15_denoise",
        "(denoise identity)",
        [
            [[0, 0, 0, 5], [3, 3, 0, 0], [3, 3, 0, 7], [0, 0, 0, 0]],
            [[1, 0, 2, 2], [0, 0, 2, 2], [8, 0, 0, 0]],
            [[0, 9, 0], [4, 4, 4], [0, 6, 0]],
        ],
        [[[0, 1, 0, 0], [5, 5, 0, 2], [5, 5, 0, 0]]],
    ),
    (
        "mock16_largest_object",
        "(object_view (largest_object (segment identity)))",
        [
            [[1, 0, 0, 0], [0, 0, 3, 3], [0, 0, 3, 3], [2, 0, 0, 0]],
            [[5, 5, 5, 0], [0, 0, 0, 0], [0, 7, 0, 0], [0, 0, 0, 4]],
            [[3, 3, 0, 0], [0, 0, 0, 0], [7, 7, 7, 0]],
            [[0, 0, 2], [6, 0, 2], [0, 0, 2]],
        ],
        [[[8, 8, 0, 0], [8, 8, 8, 0], [0, 0, 0, 1], [0, 5, 0, 0]]],
    ),
    (
        "mock17_common_shape",
        "(object_view (most_common_shape (segment identity)))",
        [
            [[4, 4, 0, 0, 0], [0, 0, 0, 4, 4], [1, 1, 1, 0, 0], [0, 0, 0, 0, 9]],
            [[7, 0, 0], [7, 0, 0], [0, 0, 7], [2, 2, 7], [0, 0, 0]],
            [[3, 3, 0, 6], [3, 3, 0, 0], [0, 0, 0, 0], [3, 3, 0, 5], [3, 3, 0, 0]],
        ],
        [[[5, 0, 0, 0], [5, 5, 0, 8], [0, 0, 0, 0], [5, 0, 2, 2], [5, 5, 0, 0]]],
    ),
    (
        "mock18_majority_color",
        "(new_canvas 1 1 (most_common_color identity))",
        [
            [[0, 0, 0], [1, 1, 0], [1, 0, 2]],
            [[4, 0, 0, 0], [0, 4, 0, 3], [0, 4, 0, 0]],
            [[0, 0, 7], [7, 7, 0], [0, 2, 2], [0, 0, 0]],
        ],
        [[[6, 0, 0, 1], [0, 6, 0, 0], [0, 0, 6, 5], [0, 0, 0, 0]]],
    ),
    (
        "mock19_count_objects",
        "(new_canvas 1 (count_objects (segment identity)) 5)",
        [
            [[1, 0, 0, 2], [0, 0, 0, 0], [3, 0, 0, 0]],
            [[4, 4, 0], [0, 0, 0], [0, 0, 7]],
            [[1, 0, 2, 0], [0, 0, 0, 0], [3, 0, 0, 1]],
        ],
        [[[0, 8, 0], [6, 0, 9], [0, 0, 0], [2, 0, 5]]],
    ),
    (
        "mock20_move_contact",
        "(move_until_contact identity (smallest_object (segment identity)) right)",
        [
            [[0, 0, 0, 3], [2, 0, 0, 3], [0, 0, 0, 3], [0, 0, 0, 0]],
            [[0, 0, 0, 0, 3], [0, 2, 0, 0, 3], [2, 2, 0, 0, 3], [0, 0, 0, 0, 3]],
            [[2, 0, 0, 0, 3], [0, 0, 0, 0, 3], [0, 0, 0, 0, 3]],
        ],
        [[[0, 0, 0, 0, 0, 3], [0, 2, 2, 0, 0, 3], [0, 0, 0, 0, 0, 3], [0, 0, 0, 0, 0, 3]]],
    ),
    (
        "mock21_line_rebound",
        "(extend_line_rebound identity)",
        [
            [[4, 0, 0, 0, 0], [0, 4, 0, 0, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0]],
            [[0, 0, 0, 0, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0], [6, 6, 0, 0, 0], [0, 0, 0, 0, 0]],
            [[0, 0, 0, 0, 3], [0, 0, 0, 3, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0]],
        ],
        [
            [
                [0, 0, 0, 0, 0, 0],
                [8, 0, 0, 0, 0, 0],
                [0, 8, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0],
            ]
        ],
    ),
    (
        "mock22_shortest_path",
        "(shortest_path identity 1 2 3)",
        [
            [
                [1, 0, 0, 0, 0],
                [0, 0, 5, 0, 0],
                [0, 0, 5, 0, 0],
                [0, 0, 5, 0, 0],
                [0, 0, 0, 0, 2],
            ],
            [
                [0, 0, 0, 0, 0],
                [0, 5, 5, 5, 0],
                [1, 0, 0, 5, 0],
                [0, 0, 0, 5, 0],
                [0, 0, 0, 0, 2],
            ],
            [
                [2, 0, 0],
                [0, 0, 0],
                [0, 0, 1],
            ],
        ],
        [
            [
                [0, 0, 0, 0, 2],
                [0, 5, 5, 0, 0],
                [0, 0, 5, 0, 0],
                [1, 0, 5, 0, 0],
                [0, 0, 0, 0, 0],
            ]
        ],
    ),
    (
        "mock23_fill_enclosed",
        "(fill_enclosed identity 4)",
        [
            [
                [0, 3, 3, 3, 0],
                [0, 3, 0, 3, 0],
                [0, 3, 3, 3, 0],
                [0, 0, 0, 0, 0],
            ],
            [
                [6, 6, 6, 0],
                [6, 0, 6, 0],
                [6, 0, 6, 0],
                [6, 6, 6, 0],
            ],
            [
                [0, 0, 0, 0],
                [0, 3, 3, 3],
                [0, 3, 0, 3],
                [0, 3, 3, 3],
            ],
        ],
        [
            [
                [3, 3, 3, 0, 0],
                [3, 0, 3, 0, 0],
                [3, 3, 3, 0, 0],
                [0, 0, 0, 0, 0],
            ]
        ],
    ),
    (
        "mock24_panel_xor",
        "(mask_xor (left_half identity) (right_half identity) 3)",
        [
            [[1, 0, 1, 1], [0, 1, 0, 1], [1, 1, 0, 0]],
            [[1, 1, 0, 1], [0, 0, 0, 0], [1, 0, 1, 0]],
            [[0, 1, 1, 1], [1, 0, 0, 0], [0, 0, 1, 1]],
        ],
        [[[1, 0, 0, 1], [1, 1, 1, 1], [0, 1, 1, 0]]],
    ),
    (
        "mock25_shift_down",
        "(translate identity down 1)",
        [
            [[1, 2, 0], [0, 3, 0], [0, 0, 0], [0, 0, 0]],
            [[5, 0], [0, 6], [0, 0]],
            [[7, 7, 7], [0, 0, 0], [0, 0, 0], [0, 0, 0]],
        ],
        [[[4, 0, 1], [0, 2, 0], [0, 0, 0]]],
    ),
    (
        "mock26_connect_dots",
        "(connect_same_color identity)",
        [
            [[2, 0, 0, 2], [0, 0, 0, 0], [5, 0, 0, 0], [5, 0, 0, 0]],
            [[0, 4, 0], [0, 0, 0], [0, 4, 0]],
            [[7, 0, 0, 0, 7], [0, 0, 0, 0, 0], [0, 1, 0, 1, 0]],
        ],
        [[[6, 0, 0, 6], [0, 0, 0, 0], [3, 0, 0, 0], [3, 0, 0, 3]]],
    ),
    (
        "mock27_gravity",
        "(gravity identity down)",
        [
            [[2, 0, 0], [0, 0, 5], [0, 0, 0], [0, 0, 0]],
            [[0, 1, 0], [0, 0, 0], [0, 0, 0], [0, 7, 0]],
            [[3, 0, 6], [0, 0, 0], [0, 0, 0]],
        ],
        [[[0, 9, 0], [4, 0, 0], [0, 0, 0], [0, 0, 0]]],
    ),
    (
        "mock28_project_down",
        "(project identity down)",
        [
            [[2, 0, 0], [0, 0, 5], [0, 0, 0], [0, 0, 0]],
            [[0, 1, 0], [0, 0, 0], [0, 6, 0]],
            [[3, 0, 6], [0, 0, 0], [0, 0, 0]],
        ],
        [[[0, 9, 0], [4, 0, 0], [0, 0, 0], [0, 0, 0]]],
    ),
    (
        "mock29_erase_smallest",
        "(erase_object identity (smallest_object (segment identity)))",
        [
            [[3, 3, 3, 0], [0, 0, 0, 0], [7, 7, 0, 0], [0, 0, 0, 0]],
            [[0, 2, 2, 0], [0, 0, 0, 0], [1, 1, 1, 1]],
            [[5, 5, 0], [5, 5, 0], [8, 8, 0], [0, 0, 0], [6, 6, 6]],
        ],
        [[[9, 9, 9, 0], [0, 0, 0, 0], [0, 0, 4, 4], [0, 0, 4, 4], [6, 6, 0, 0]]],
    ),
]


def intended_solutions() -> dict[str, str]:
    """Task id -> canonical text of the program each task was built from."""
    return {task_id: text for task_id, text, _, _ in _SPECS}


def build_mock_corpus() -> Dataset:
    tasks = tuple(_task(tid, text, tr, te) for tid, text, tr, te in _SPECS)
    return Dataset(name="mock_corpus", tasks=tasks, split=Split.CUSTOM)


def write_mock_corpus(directory: str | Path) -> Path:
    """Materialize the corpus as one task file per task (interchange format)."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for task in build_mock_corpus().tasks:
        (out / f"{task.id}.json").write_text(serialize_task(task) + "\n")
    return out
