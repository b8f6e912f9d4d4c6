"""Exception types raised across noisebench."""

from __future__ import annotations


class NoiseBenchError(Exception):
    """Base class for all noisebench errors."""


class ParameterError(NoiseBenchError, ValueError):
    """A noise, filter, sampler or plan parameter violates its constraints."""


class ShapeMismatchError(NoiseBenchError, ValueError):
    """Two images that must share dimensions do not."""


class SizeError(NoiseBenchError, ValueError):
    """Image dimensions are empty or exceed the supported pixel count."""


class SpectralConsistencyError(NoiseBenchError, ArithmeticError):
    """An inverse transform left an imaginary residue above tolerance."""


class PgmParseError(NoiseBenchError, ValueError):
    """Malformed binary PGM input."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class BenchCellError(NoiseBenchError):
    """A failure inside one (noise, filter) cell of the benchmark."""

    def __init__(self, noise: str, filter_kind: str | None, cause: BaseException):
        where = f"noise '{noise}'" if filter_kind is None else f"noise '{noise}', filter '{filter_kind}'"
        super().__init__(f"benchmark cell failed ({where}): {cause}")
        self.noise = noise
        self.filter = filter_kind
        self.cause = cause
