"""Exception types shared across the package."""


class MqcLabError(Exception):
    """Base class for package-specific errors."""


class ImpossibleOutcomeError(MqcLabError):
    """A measurement branch with (numerically) zero probability was requested."""


class SizeLimitError(MqcLabError):
    """An operation would exceed a configured size ceiling (qubits, leaves, terms)."""


class GraphMeasurementError(MqcLabError):
    """A graph-level measurement that the rewrite rules do not support (X basis)."""


class UnknownVertexError(MqcLabError, KeyError):
    """A vertex label that is not present in the graph."""


class NoPathError(MqcLabError):
    """No path between the requested vertices (E_Bell = 0 certificate)."""


class StructureCheckError(MqcLabError):
    """A lattice-conversion output failed its structural equality check."""


class UsageError(MqcLabError):
    """Bad command-line usage (maps to exit code 64)."""
