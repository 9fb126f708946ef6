"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """A Bell-diagonal coefficient vector violates the simplex constraints."""


class NotDistillableError(ValueError):
    """The input fidelity is at or below 1/2, so a step cannot gain fidelity."""


class FallbackAboveTargetError(ValueError):
    """The unsuccessful-case fidelity already meets or exceeds the target."""


class NotBellDiagonalError(ValueError):
    """A density matrix has significant off-diagonal Bell-basis elements."""


class ResourceCapError(RuntimeError):
    """Exact evaluation was requested beyond the supported problem size."""
