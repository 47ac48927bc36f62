"""Exception hierarchy shared by the pipeline stages.

The CLI maps these onto exit statuses: input problems exit 2, resource and
solver problems exit 3, failed mathematical verifications exit 1.
"""


class GeodeteError(Exception):
    pass


class InputError(GeodeteError, ValueError):
    """Malformed or out-of-contract input."""


class ResourceLimitError(GeodeteError):
    """A configured enumeration bound was exceeded."""


class ValidationError(GeodeteError):
    """A mathematical verification failed.

    ``check`` names the failed condition (e.g. ``"dihedral_injectivity"``).
    """

    def __init__(self, check, message):
        super().__init__(f"{check}: {message}")
        self.check = check
        self.detail = message


class UnsupportedError(GeodeteError):
    pass


class RealizationError(GeodeteError):
    """Gram matrix or polyhedron cannot be realized as required."""


class SolverError(GeodeteError):
    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class ConsistencyError(GeodeteError, AssertionError):
    """An internal identity that must hold did not."""


class EmissionError(GeodeteError):
    def __init__(self, missing):
        super().__init__("incomplete certificate, missing stages: " + ", ".join(missing))
        self.missing = list(missing)


class SemanticError(InputError):
    """A well-formed query that is meaningless for this object."""
