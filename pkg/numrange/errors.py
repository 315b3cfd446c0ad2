"""Exception hierarchy.

Every error raised by the library derives from :class:`NumrangeError` and from
the builtin exception a caller would naturally expect, so ``except ValueError``
keeps working.
"""


class NumrangeError(Exception):
    """Base class of all numrange errors."""


class InvalidInputError(NumrangeError, ValueError):
    """Non-finite values, malformed shapes or malformed permutations."""


class ContractViolationError(NumrangeError, ValueError):
    """A documented precondition does not hold."""


class DegenerateInputError(NumrangeError, ValueError):
    """Rank deficiency; ``index`` names the first offending vector."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DimensionError(NumrangeError, ValueError):
    """Size mismatch, including frames with more columns than the space has dimensions."""


class InsufficientSamplingError(NumrangeError, RuntimeError):
    """The cloud has no point within the requested radius of a candidate."""


class MatrixFileError(NumrangeError):
    exit_code = 2


class MatrixParseError(MatrixFileError):
    exit_code = 4

    def __init__(self, message, lineno=None, colno=None):
        super().__init__(message)
        self.lineno = lineno
        self.colno = colno


class MatrixShapeError(MatrixFileError):
    exit_code = 5


class MatrixValueError(MatrixFileError):
    exit_code = 6
