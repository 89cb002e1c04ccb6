"""Exceptions shared across the package.

CapExceeded maps to CLI exit code 2, InvariantViolation to exit code 3.
"""


class CapExceeded(RuntimeError):
    """An exact enumeration would exceed its configured cap.

    Raised instead of silently truncating: results are exact or refused.
    """


class InvariantViolation(RuntimeError):
    """A deterministic theorem-backed bound failed; this indicates a bug.

    Carries a ``dump`` dict with the offending state for post-mortem.
    """

    def __init__(self, message, dump=None):
        super().__init__(message)
        self.dump = dump or {}
