"""Exception types shared across the package.

Two failure modes are kept apart on purpose: data that is not even
well-formed (wrong shape, missing table entries, colliding tokens) raises
InputError, while well-formed data that breaks a mathematical guarantee a
construction relies on raises TheoryViolation.  The command-line layer maps
the former to exit code 2 and the latter to exit code 1.
"""

from __future__ import annotations


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class TheoryViolation(RuntimeError):
    """A construction's mathematical precondition failed at runtime.

    Carries the name of the violated guard plus a witness description so
    reports can say exactly what refused.
    """

    def __init__(self, guard: str, detail: str = ""):
        self.guard = guard
        self.detail = detail
        msg = guard if not detail else f"{guard}: {detail}"
        super().__init__(msg)
