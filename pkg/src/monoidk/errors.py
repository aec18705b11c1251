"""Exception types and the enumeration size guard."""

import os

DEFAULT_SIZE_GUARD = 10**6


class StructuralError(ValueError):
    """Malformed input: bad shapes, out-of-range indices, mismatched objects."""


class InvalidStructureError(ValueError):
    """Well-formed input that violates an algebraic axiom."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class NotInvertibleError(ValueError):
    pass


class SizeGuardError(RuntimeError):
    pass


class UnsupportedError(ValueError):
    pass


def size_guard() -> int:
    """Largest enumeration allowed, from ``MONOIDK_SIZE_GUARD``."""
    raw = os.environ.get("MONOIDK_SIZE_GUARD")
    if not raw:
        return DEFAULT_SIZE_GUARD
    try:
        value = int(float(raw))
    except ValueError:
        raise StructuralError(f"MONOIDK_SIZE_GUARD must be an integer, got {raw!r}")
    return value


def check_size(count: int, what: str) -> None:
    bound = size_guard()
    if count > bound:
        raise SizeGuardError(
            f"refusing to enumerate {count} {what} (bound {bound}; set MONOIDK_SIZE_GUARD to raise it)"
        )
