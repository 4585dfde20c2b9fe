"""Exception types shared across the package.

Everything raised deliberately by this package derives from PermpartError,
so callers (in particular the CLI) can separate computation failures from
programming errors.
"""


class PermpartError(Exception):
    """Base class for all errors raised by permpart."""


class ParseError(PermpartError):
    """Malformed textual input (cycle notation, partitions, catalogs,
    construction expressions).

    Carries an optional ``position`` (0-based offset or line number,
    depending on the input kind) for error reporting.
    """

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class DegreeMismatch(PermpartError):
    """Operands act on point sets of different sizes."""


class NotTransitiveError(PermpartError):
    """An operation that requires a transitive group got an intransitive one."""


class BudgetExceeded(PermpartError):
    """An explicit resource cap (element count, degree, system count, ...)
    was exceeded.  Never raised silently; callers may retry with larger caps.
    """


class NotSubgroupError(PermpartError):
    """Claimed subgroup elements fail the membership test."""


class NotInvariantError(PermpartError):
    """A partition that must be invariant under the group is not."""
