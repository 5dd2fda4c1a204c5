class InputError(ValueError):
    """Raised for out-of-range or inconsistent inputs."""


class SolverError(RuntimeError):
    """Raised when an internal numerical routine fails unexpectedly."""
