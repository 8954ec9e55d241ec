"""
This module defines the error types raised by the signalgame code, and enables extending existing
exceptions with extra information.
"""

__all__ = [
    "SignalGameError",
    "InvalidInputError",
    "DimensionMismatchError",
    "InconsistentDecompositionError",
    "SolverError",
    "InstanceTooLargeError",
    "ExtendedException",
    "extend_exception",
]


####################################################################################################

class SignalGameError(Exception):
    """
    Base class for all errors raised on purpose by this project.
    """


class InvalidInputError(SignalGameError, ValueError):
    """
    An input violates one of the invariants of its type. The message names the invariant.
    """


class DimensionMismatchError(InvalidInputError):
    """
    Two inputs that must agree in shape (number of states, number of vertices, ...) don't.
    """


class InconsistentDecompositionError(InvalidInputError):
    """
    A convex decomposition does not average to the prior it is supposed to decompose.
    """


class InstanceTooLargeError(SignalGameError):
    """
    An exact (enumeration or grid based) routine was asked to handle an instance above its limit.
    """


####################################################################################################

class SolverError(SignalGameError):
    """
    The LP backend did not return an optimal solution. Carries the solver status and whatever
    residuals were available, so they can be reported.
    """

    def __init__(self, descr: str, status: int, message: str, residuals: dict | None = None):
        self.descr = descr
        self.status = status
        self.solver_message = message
        self.residuals = residuals or {}
        super().__init__(str(self))

    def __str__(self):
        text = f"LP solver failed to {self.descr} (status {self.status}): {self.solver_message}"
        if self.residuals:
            parts = ", ".join(f"{k}={v:.3g}" for k, v in self.residuals.items())
            text += f" [residuals: {parts}]"
        return text


####################################################################################################

class ExtendedException(Exception):
    """
    A wrapper exception class that extends its inner exception with a prefix and a suffix to the
    message.
    """

    def __init__(self, e: Exception, prefix: str, suffix: str = ""):
        self.prefix = prefix
        self.suffix = suffix
        self.e = e

    def __getattr__(self, item: str):
        # forward unknown attributes to the inner exception
        return getattr(self.e, item)

    def __str__(self):
        return f"(wrapping {type(self.e).__name__}):\n" \
               f"> {self.prefix}{self.e}{self.suffix}"


def extend_exception(e: Exception, prefix: str, suffix: str = "") -> ExtendedException:
    """
    Wraps `e` into an :py:class:`ExtendedException` whose message carries the given prefix and
    suffix. These are meant to bubble up to the CLI, where they are printed.

    Raise with `raise lib.extend_exception(...) from None` to avoid printing the original stack
    twice.
    """
    return ExtendedException(e, prefix, suffix)

####################################################################################################
