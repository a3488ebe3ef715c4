"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A model or run parameter is outside its admissible domain."""


class DegenerateMatrixError(ArithmeticError):
    """The 2x2 operator is defective (coincident eigenvalues); eigenvector
    based quantities are undefined."""


class BlowUpError(RuntimeError):
    """The time integration produced NaN/Inf values."""

    def __init__(self, time, max_abs_u):
        self.time = time
        self.max_abs_u = max_abs_u
        super().__init__(
            f"solution blew up at t={time:.6g} (max |u| = {max_abs_u:.6g})"
        )
