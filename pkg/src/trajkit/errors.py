"""Exception types shared across the package."""


class TrajkitError(Exception):
    """Base class for all trajkit errors."""


class ValidationError(TrajkitError):
    """Invalid input data: bad coordinates, broken schema, malformed files."""


class ConfigError(TrajkitError):
    """Invalid pipeline configuration; raised before any step executes."""


class SegmentFailure(TrajkitError):
    """A per-trajectory operation failed.

    Carries the trajectory id so callers can point at the offending data even
    when the failure happened in a worker process.
    """

    def __init__(self, traj_id: str, message: str):
        super().__init__(traj_id, message)
        self.traj_id = traj_id
        self.message = message

    def __str__(self) -> str:
        return f"trajectory {self.traj_id!r}: {self.message}"
