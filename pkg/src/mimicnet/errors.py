"""Exception types shared across the package.

Each error maps to one CLI exit code (see :mod:`mimicnet.cli`).
"""


class MimicError(Exception):
    """Base class. ``stage`` names the pipeline step that raised, when known."""

    exit_code = 1

    def __init__(self, message, *, stage=None):
        super().__init__(message)
        self.stage = stage

    def __str__(self):
        msg = super().__str__()
        return f"[{self.stage}] {msg}" if self.stage else msg


class InputError(MimicError, ValueError):
    """Malformed graph, bad terminal set or invalid configuration."""

    exit_code = 2


class GuardRefusal(MimicError):
    """An exponential routine was asked to run beyond its size guard."""

    exit_code = 3


class RandomizedConstructionError(MimicError):
    """A randomized representation kept failing self-certification."""

    exit_code = 4

    def __init__(self, message, *, seed=None, stage=None):
        super().__init__(message, stage=stage)
        self.seed = seed


class SingularMatrixError(ArithmeticError):
    """Raised by the solvers in :mod:`mimicnet.field`."""


class InvariantError(MimicError, AssertionError):
    """An internal consistency check failed. Always a bug."""
