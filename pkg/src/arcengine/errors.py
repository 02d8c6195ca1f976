"""Shared exception types.

Two broad families: hard errors that indicate malformed inputs or broken
invariants (``DimensionError``, ``SymbolError``, ``FormatError``, ...), and
recoverable evaluation signals (``EvalError``, ``BudgetExceeded``) that the
program search treats as data, never as faults.
"""


class ArcError(Exception):
    """Base class for all library errors."""


class DimensionError(ArcError):
    """Grid height or width outside [1, 30], or ragged rows."""


class SymbolError(ArcError):
    """Cell value outside [0, 9]."""


class FormatError(ArcError):
    """Malformed task text (missing fields, bad structure)."""


class IoError(ArcError):
    """Filesystem-level failure while loading or writing datasets."""


class EmptyDatasetError(ArcError):
    """Statistics requested over a dataset with no tasks."""


class ParseError(ArcError):
    """Malformed program text."""


class EvalError(ArcError):
    """Recoverable DSL evaluation failure (bad selector, oversize output...).

    The synthesis search survives millions of these; they are signals,
    not faults.
    """


class BudgetExceeded(ArcError):
    """DSL evaluation exceeded its node or cell budget."""


class SystemFailure(ArcError):
    """An intelligent-system procedure faulted during a protocol phase."""


class NetworkError(ArcError):
    """Dataset fetch could not reach the remote source."""


class ChecksumMismatch(ArcError):
    """Cached dataset file does not match its recorded checksum."""


class DegenerateSolution(ArcError):
    """Complexity of a solution program is zero; ratios are undefined."""


class EmptyScope(ArcError):
    """Intelligence score requested over an empty task scope."""
