"""Exception hierarchy shared by all modules.

Every exception carries the process exit code the command line interface maps it to.
"""

from typing import Optional, Sequence

__all__ = [
    "NessError",
    "ConfigError",
    "StructuralInputError",
    "NonUniqueSteadyStateError",
    "StabilityError",
    "ConvergenceError",
    "PureDirectionError",
    "SingularMomentumError",
    "FitDomainError",
    "SizeCapError",
    "EXIT_CODES",
]


class NessError(Exception):
    """Base class of all errors raised by `ness_geometry`."""

    exit_code = 1


class ConfigError(NessError, ValueError):
    """Invalid run configuration, located by key and line."""

    exit_code = 2

    def __init__(self, message: str, key: Optional[str] = None, line: int = 0) -> None:
        self.message = message
        self.key = key
        self.line = line
        super().__init__(f"{message} (line {line})")


class StructuralInputError(NessError, ValueError):
    """A matrix or config violates a structural invariant (shape, symmetry, range)."""

    exit_code = 2


class NonUniqueSteadyStateError(NessError, ArithmeticError):
    """The steady state is not unique (vanishing gap or degenerate kernel)."""

    exit_code = 3


class StabilityError(NonUniqueSteadyStateError):
    """The structure matrix X has eigenvalues with negative real part."""


class ConvergenceError(NessError, ArithmeticError):
    """A solution failed its residual certification."""

    exit_code = 4

    def __init__(self, message: str, residual: float, tolerance: float) -> None:
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(f"{message}: residual {residual:.3e} > {tolerance:.3e}")


class PureDirectionError(NessError, ValueError):
    """A correlation matrix eigenvalue touches ±1 where a mixed state is required."""

    exit_code = 4


class SingularMomentumError(NessError, ArithmeticError):
    """The ring dispersion vanishes at a momentum where the metric is needed."""

    exit_code = 4

    def __init__(self, message: str, momenta: Sequence[int]) -> None:
        self.momenta = tuple(momenta)
        super().__init__(f"{message}: k = {list(self.momenta)}")


class FitDomainError(NessError, ValueError):
    """Power-law fit input outside its domain."""

    exit_code = 4


class SizeCapError(NessError, ValueError):
    """A dense or combinatorial computation exceeds its size cap."""

    exit_code = 5


EXIT_CODES = {
    cls.__name__: cls.exit_code
    for cls in (
        NessError,
        ConfigError,
        StructuralInputError,
        NonUniqueSteadyStateError,
        StabilityError,
        ConvergenceError,
        PureDirectionError,
        SingularMomentumError,
        FitDomainError,
        SizeCapError,
    )
}
