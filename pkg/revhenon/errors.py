from __future__ import annotations


class RevhenonError(RuntimeError):
    """Base class for everything the library raises on purpose."""


class NumericalError(RevhenonError):
    """A computation could not be completed at the requested accuracy."""


class NoConvergence(NumericalError):
    def __init__(self, message: str, iterations: int | None = None, residual: float | None = None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class IllConditioned(NumericalError):
    def __init__(self, message: str, value: float | None = None):
        super().__init__(message)
        self.value = value


class DenominatorVanishes(NumericalError):
    def __init__(self, message: str, value: float | None = None):
        super().__init__(message)
        self.value = value


class NonPrimitive(NumericalError):
    def __init__(self, message: str, period: int, primitive_period: int):
        super().__init__(message)
        self.period = period
        self.primitive_period = primitive_period


class SingularNewtonMatrix(NumericalError):
    pass


class StallAtSingularity(NumericalError):
    def __init__(self, message: str, parameter: float, step: float):
        super().__init__(message)
        self.parameter = parameter
        self.step = step


class AmbiguousEvent(NumericalError):
    def __init__(self, message: str, parameter: float, counts: tuple[int, int]):
        super().__init__(message)
        self.parameter = parameter
        self.counts = counts


class DomainError(RevhenonError, ValueError):
    """Inputs outside the region where an operation is defined."""


class ConfigError(RevhenonError, ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
