"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: input problems exit 1, inconsistent
input data exits 2, resource caps exit 3.
"""


class DTorsionError(Exception):
    exit_code = 1


class ValidationError(DTorsionError, ValueError):
    """An object (Kupisch series, context) violates its defining inequalities."""


class DomainError(DTorsionError, ValueError):
    """A tuple lies outside the universe it is used with."""


class UsageError(DTorsionError, ValueError):
    """An operation was called with arguments breaking its precondition."""


class InconsistentDataError(DTorsionError):
    exit_code = 2


class ResourceError(DTorsionError):
    exit_code = 3
