"""Shared error types."""


class SolverError(RuntimeError):
    """An iterative solver failed to converge; carries diagnostics in args."""
