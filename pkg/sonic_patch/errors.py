"""Exception hierarchy and process exit codes for sonic-patch.

Admissibility and invariant failures are reported through report objects, never
raised. Everything here signals that an operation could not produce a result.
"""

from __future__ import annotations

from enum import IntEnum


class ExitCode(IntEnum):
    """Exit status contract of the `sonic-patch` command."""

    OK = 0
    CONFIG = 1
    ADMISSIBILITY = 2
    SOLVER = 3
    INVARIANT = 4


class DomainError(ValueError):
    """An argument lies outside the domain of the operation it was passed to."""


class ConfigError(ValueError):
    """The run configuration is unreadable or violates its schema."""


class TraceError(ValueError):
    """Boundary data are inconsistent (the hodograph image is not monotone).

    Attributes:
        x: Abscissa on the boundary arc where the inconsistency was detected.
    """

    def __init__(self, message: str, x: float | None = None) -> None:
        super().__init__(message if x is None else f"{message} (at x={x:.6g})")
        self.x = x


class GeometryError(ValueError):
    """The hodograph region is degenerate or a characteristic foot left it."""


class MeshError(ValueError):
    """The characteristic mesh cannot be built for the requested resolution."""


class MarchError(RuntimeError):
    """A non-finite value appeared while marching.

    Attributes:
        level: Mesh level index of the offending node.
        char_id: Characteristic index of the offending node.
    """

    def __init__(self, message: str, level: int, char_id: int) -> None:
        super().__init__(f"{message} (level={level}, char_id={char_id})")
        self.level = level
        self.char_id = char_id


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class InversionError(RuntimeError):
    """A non-finite integrand appeared while mapping back to the physical plane.

    Attributes:
        char_id: Characteristic along which the integration failed.
    """

    def __init__(self, message: str, char_id: int) -> None:
        super().__init__(f"{message} (char_id={char_id})")
        self.char_id = char_id
