"""Exception hierarchy for train track computations and input handling."""

import re


class TrainTrackError(Exception):
    """Base error of the toolkit"""

    exit_code = 1


class RecoverableError(TrainTrackError):
    """Retrying with larger limits may succeed"""


class FatalError(TrainTrackError):
    """The input or the computation is wrong; retrying will not help"""


class InputError(FatalError):
    """Malformed or unsupported input"""

    exit_code = 4


class BudgetExceededError(RecoverableError):
    """A bounded search hit its budget before reaching a verdict"""

    exit_code = 3

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class RadiusExceededError(RecoverableError):
    """Evaluation outside a finite ball of the universal cover"""


class StructuralError(FatalError):
    """A path, graph or map violates a structural invariant"""


class ParseError(InputError):
    """Syntax error in an automorphism or representative"""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NotInvertibleError(InputError):
    """The given endomorphism is not an automorphism"""


class NotIrreducibleError(FatalError):
    """Matrix is reducible or zero"""


class NotEGError(FatalError):
    """Operation requires an exponentially growing stratum"""


class NotInvariantError(FatalError):
    """A free factor system is not invariant under the automorphism"""


class ImproperSystemError(InputError):
    """A free factor system is not proper"""


class DegenerateRayError(FatalError):
    """Ray generated by a Nielsen path"""


class TrivialSubgroupError(InputError):
    """Subgroup generated by trivial words only"""


class NotRealizableError(FatalError):
    """A chain of invariant free factor systems could not be realized by a filtration"""


class LiftError(FatalError):
    """No lift of the representative matches the requested automorphism"""


class CaseTableError(FatalError):
    """An outcome outside the core filtration case table"""


class ChecksumError(FatalError):
    """Persisted artifact failed its checksum"""


class NonCompletionError(FatalError):
    """The CT pipeline did not converge within its restart limit"""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


def classify_exit_code(exc: BaseException) -> int:
    """Exit code for an exception raised while running a command."""
    if isinstance(exc, TrainTrackError):
        return exc.exit_code
    if isinstance(exc, (ValueError, KeyError, FileNotFoundError)):
        return 4
    return 1


def extract_position(message: str) -> int | None:
    """Recover the position recorded in a ParseError message."""
    match = re.search(r"at position (\d+)", message)
    if match:
        return int(match.group(1))
    return None
