"""ARC grid-reasoning engine.

Layers: grid values and segmentation (`grid`), task interchange
(`taskio`), the core-knowledge DSL (`dsl`), the enumerative solver
(`synthesis`), the task/system interaction protocol (`protocol`),
skill-acquisition metrics (`metrics`), and the CLI plus human test
session service (`cli`, `service`).
"""

__version__ = "0.1.0"
