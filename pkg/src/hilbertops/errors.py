"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Raised when operands have incompatible truncation dimensions."""


class NonFiniteError(ValueError):
    """Raised when an input or an evaluated function value is NaN or infinite."""


class NotDifferentiable(ArithmeticError):
    """Raised when a derivative is requested where the operator has none.

    For the quasi-Hilbert-Schmidt operator this is the singular set
    ``z1**2 + z2**2 == 0``; use :func:`hilbertops.gendiff.probe_membership`
    to examine coderivative membership there.
    """
