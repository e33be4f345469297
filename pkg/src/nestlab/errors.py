"""Exception hierarchy.

Every error raised for bad mathematical input derives from :class:`NestlabError`
so callers (and the CLI) can separate domain failures from programming bugs.
"""


class NestlabError(Exception):
    """Base class for all library errors."""


class InvariantViolation(NestlabError, ValueError):
    """A constructor was handed data that breaks a type invariant."""


# algebra
class EmptyComposition(InvariantViolation):
    pass


class NonPositiveRank(InvariantViolation):
    pass


class PositionOutOfRange(InvariantViolation, IndexError):
    pass


# pisom
class CellOutOfRange(InvariantViolation):
    pass


class NotPartialPermutation(InvariantViolation):
    pass


class NotInAlgebra(InvariantViolation):
    pass


# embedding
class NotMonotone(InvariantViolation):
    pass


class CapacityExceeded(InvariantViolation):
    pass


class EmptySummandList(InvariantViolation):
    pass


class SlotError(InvariantViolation):
    pass


class NotInDomain(InvariantViolation):
    pass


class DomainMismatch(InvariantViolation):
    pass


class MarginMismatch(InvariantViolation):
    pass


class ScaleViolation(InvariantViolation):
    pass


class NotNonnegative(InvariantViolation):
    pass


class RelationViolation(NestlabError):
    """A matrix-unit table does not satisfy the relations of a *-homomorphism."""


class NotInCodomainAlgebra(NestlabError):
    pass


class IrregularImage(NestlabError):
    pass


# structure / conjugacy
class NotT2Degenerate(NestlabError):
    pass


class InconsistentColumns(NestlabError):
    pass


class NoLocRealization(NestlabError):
    pass


# lift
class NotStaircase(NestlabError):
    pass


class NotStrictlyMonotone(NestlabError):
    pass


class CornerMissing(NestlabError):
    pass


class DegenerateInput(NestlabError):
    pass


class NoCommonCorner(NestlabError):
    """The partial isometries to be multiplied share no common corner piece."""


class NotTriangularDomain(NestlabError):
    pass


class NotOrderPreserving(NestlabError):
    pass


# system
class ChainMismatch(InvariantViolation):
    pass


class StageOutOfRange(InvariantViolation, IndexError):
    pass


# text format and command line
class ParseError(NestlabError):
    """Input text problem located at ``line``/``col`` (both 1-based)."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {message}" if line else message)


class GrammarError(ParseError):
    """Text that does not match the grammar."""


class UnknownReference(ParseError):
    pass


class DuplicateName(ParseError):
    pass


class UsageError(NestlabError):
    pass


class UnknownCommand(UsageError):
    pass


class MissingArgument(UsageError):
    pass
