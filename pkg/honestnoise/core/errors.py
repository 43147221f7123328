"""
Exception hierarchy for honestnoise
"""
from typing import Optional


class HonestNoiseError(Exception):
    """Base class for every error raised by honestnoise"""


class NonSquareError(HonestNoiseError, ValueError):
    """A square matrix was required"""


class NotHermitianError(HonestNoiseError, ValueError):
    """Matrix asymmetry exceeds the Hermiticity tolerance"""


class NonFiniteError(HonestNoiseError, ValueError):
    """Matrix contains NaN or Inf entries"""


class DimensionMismatchError(HonestNoiseError, ValueError):
    """Operands act on spaces of different dimension"""


class InvalidChannelError(HonestNoiseError, ValueError):
    """Kraus list is empty, malformed, or not trace preserving"""


class InvalidChiError(HonestNoiseError, ValueError):
    """Process matrix has the wrong shape or is not Hermiticity preserving"""


class NotTracePreservingError(HonestNoiseError, ValueError):
    """Pauli transfer matrix first row differs from (1, 0, ..., 0)"""


class NotUnitalError(HonestNoiseError, ValueError):
    """Channel has a nonzero Bloch translation vector"""


class BadProbabilityError(HonestNoiseError, ValueError):
    """Probability parameter outside its admissible range"""


class BadAxisError(HonestNoiseError, ValueError):
    """Rotation or dephasing axis is not a unit 3-vector"""


class UnknownPresetError(HonestNoiseError, ValueError):
    """Preset or mixing-set name is not registered"""


class InvalidMixingSetError(HonestNoiseError, ValueError):
    """Mixing set lacks the identity, holds a non-unitary, or mixes dimensions"""


class ParseError(HonestNoiseError, ValueError):
    """Input document could not be parsed into a channel"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SolverFailureError(HonestNoiseError, RuntimeError):
    """Semidefinite program did not close its duality gap"""


class InfeasibleError(HonestNoiseError, RuntimeError):
    """No mixture over the mixing set satisfies the honesty certificate"""
