"""Exception hierarchy shared by the library and the CLI."""


class GemkitError(Exception):
    """Base class for all gemkit errors."""


class InputError(GemkitError, ValueError):
    """Malformed or inconsistent user input (bad state file, broken normalization, ...)."""


class MethodUnavailableError(GemkitError):
    """A closed-form result was requested for a state family that has none."""


class ConvergenceError(GemkitError):
    """An iterative solver failed to reach its tolerance."""


class BranchError(GemkitError):
    """A result was requested for the wrong analytic branch or region."""
