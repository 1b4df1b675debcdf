"""Exception types shared across the package.

InputError subclasses signal malformed user-supplied data (CLI exit code 1);
InvariantViolation signals a broken internal contract (CLI exit code 2).
"""

from __future__ import annotations


class ArchddError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ArchddError):
    """Malformed or inconsistent user-supplied input."""


class SnapshotParseError(InputError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"snapshot line {lineno}: {message}")
        self.lineno = lineno


class PartitionViolation(InputError):
    """An entity appeared in two different components of one snapshot."""

    def __init__(self, entity: str, first: str, second: str):
        super().__init__(
            f"entity {entity!r} appears in both component {first!r} and "
            f"component {second!r}; components must partition the entity set"
        )
        self.entity = entity
        self.components = (first, second)


class RecordParseError(InputError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"record line {lineno}: {message}")
        self.lineno = lineno


class ConfigError(InputError):
    """Bad run configuration, rule file, or structured document."""


class InvariantViolation(ArchddError):
    """An internal contract was violated; indicates a bug or API misuse."""
