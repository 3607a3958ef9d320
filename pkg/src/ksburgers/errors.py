"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid user-facing input: grid parameters, config values, norms, etc."""


class GridMismatchError(ValidationError):
    """Two objects that must share a grid do not."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Attributes:
        estimate: the achieved absolute error estimate.
    """

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (achieved error estimate {estimate:.3e})")
        self.estimate = estimate


class PicardConvergenceError(RuntimeError):
    """Fixed-point iteration did not converge within the iteration budget.

    Attributes:
        last_ratio: contraction ratio between the last two successive differences.
        iterations: number of iterations performed.
    """

    def __init__(self, message: str, last_ratio: float, iterations: int):
        super().__init__(
            f"{message} (last contraction ratio {last_ratio:.4f} "
            f"after {iterations} iterations)"
        )
        self.last_ratio = last_ratio
        self.iterations = iterations


class BlowUpError(RuntimeError):
    """Time integration produced a non-finite field.

    Attributes:
        last_valid_time: latest time with a finite field.
    """

    def __init__(self, message: str, last_valid_time: float):
        super().__init__(f"{message} (last valid time t={last_valid_time:.6g})")
        self.last_valid_time = last_valid_time


class GridResolutionError(RuntimeError):
    """A grid-based norm did not converge under refinement."""
