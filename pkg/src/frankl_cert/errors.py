"""Exception types shared by the library and the command-line front end."""


class InputError(ValueError):
    """Malformed or out-of-contract input (bad element, empty family, ...)."""


class GroundMismatchError(InputError):
    """Two families were combined over different ground sizes."""


class ResourceGuardError(RuntimeError):
    """A configured size cap or cost guard would be exceeded."""


class ContractViolation(RuntimeError):
    """An internal guarantee failed; indicates a bug, never bad input."""
