"""Exception types raised by the numerical routines.

Everything derives from :class:`GptShapeError` (itself a ``ValueError``) so
callers such as the CLI can separate numerical/method failures from usage
errors with a single ``except``.
"""


class GptShapeError(ValueError):
    pass


class DomainError(GptShapeError):
    """Evaluation point outside the region where a formula is valid."""


class ShapeError(GptShapeError):
    """Boundary curve is not a simple closed curve."""


class ContrastError(GptShapeError):
    """Conductivity contrast outside |lambda| >= 1/2."""


class AssemblyError(GptShapeError):
    pass


class DegenerateError(GptShapeError):
    """A recovery formula hit a (near) singular denominator."""


class TruncationError(GptShapeError):
    pass
