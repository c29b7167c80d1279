"""Exception hierarchy.

Every error raised on purpose by the library derives from ``SingleJumpError``.
The ``exit_code`` attribute is what the command line front end returns when
the exception escapes a run.
"""


class SingleJumpError(Exception):
    exit_code = 5


class InvalidDistribution(SingleJumpError, ValueError):
    """The law of the jump time violates a structural invariant."""


class NonEvaluable(SingleJumpError, ValueError):
    """A function produced a non-finite value where the measure charges mass."""


class NotAtomic(SingleJumpError, ValueError):
    """An atoms-only routine received a law with a density part."""


class NotLocallyIntegrable(SingleJumpError):
    """A function is not integrable against dG on some compact part of the support."""

    exit_code = 4


class CaseBNonIntegrable(NotLocallyIntegrable):
    """Case B requires integrability over the whole closed support."""


class IndeterminateLimit(SingleJumpError):
    """The limit of F*Gbar falls in the band where its sign cannot be trusted."""

    exit_code = 4

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class VanishingK(SingleJumpError, ValueError):
    """The conditional mark mean K is not strictly positive."""


class NonFiniteValue(SingleJumpError, ValueError):
    """A simulated path hit a non-finite value of F or H."""


class ConfigParseError(SingleJumpError):
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class ConfigValidationError(SingleJumpError):
    exit_code = 3

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
