"""
Noise synthesis for the eight noise models.

Each kind has a frozen parameter record whose constraints are checked at
construction, before any pixel work. ``apply_noise`` draws per-pixel variates
from one xoshiro256** lane per image row (lane ``y`` is seeded from
``derive_substream(seed, "row:<y>")``), consuming the stream left to right along
the row, so results do not depend on how rows are scheduled.

Composition per kind:
    gaussian, erlang, exponential, rayleigh, periodic  additive
    speckle                                            multiplicative (mean-1 Erlang multiplier)
    salt_pepper                                        impulse replacement with 0 / 255
    poisson                                            photon counting, lambda = intensity * peak / 255
"""

from __future__ import annotations
import math
from typing import Any, Union, Mapping, Callable, ClassVar
from dataclasses import dataclass

import numpy as np

from noisebench.utils.rng import (
    Rng,
    check_seed,
    uniform01,
    sample_gamma,
    sample_normal,
    sample_poisson,
    sample_rayleigh,
    sample_exponential,
)
from noisebench.utils.params import require, build_params, describe_params
from noisebench.utils.errors import ParameterError
from noisebench.utils.image_core import ImageGrid


def _is_count(value: Any) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


NOISE_KINDS: tuple[str, ...] = (
    "gaussian",
    "salt_pepper",
    "speckle",
    "poisson",
    "periodic",
    "erlang",
    "exponential",
    "rayleigh",
)


@dataclass(slots=True, frozen=True)
class GaussianNoise:
    kind: ClassVar[str] = "gaussian"

    mu: float = 0.0
    sigma: float = 35.0

    def __post_init__(self) -> None:
        require(math.isfinite(self.mu), f"gaussian mu must be finite, got {self.mu}")
        require(self.sigma >= 0 and math.isfinite(self.sigma), f"gaussian sigma must be >= 0, got {self.sigma}")


@dataclass(slots=True, frozen=True)
class SaltPepperNoise:
    kind: ClassVar[str] = "salt_pepper"

    density: float = 0.05
    salt_fraction: float = 0.5

    def __post_init__(self) -> None:
        require(0 <= self.density <= 1, f"salt_pepper density must lie in [0, 1], got {self.density}")
        require(
            0 <= self.salt_fraction <= 1, f"salt_pepper salt_fraction must lie in [0, 1], got {self.salt_fraction}"
        )


@dataclass(slots=True, frozen=True)
class SpeckleNoise:
    kind: ClassVar[str] = "speckle"

    variance: float = 0.04

    def __post_init__(self) -> None:
        require(
            self.variance >= 0 and math.isfinite(self.variance), f"speckle variance must be >= 0, got {self.variance}"
        )

    @property
    def stages(self) -> int:
        """Erlang shape k of the multiplier; 0 when the variance is zero (no noise)."""
        if self.variance == 0:
            return 0
        return max(1, int(math.floor(1.0 / self.variance + 0.5)))


@dataclass(slots=True, frozen=True)
class PoissonNoise:
    kind: ClassVar[str] = "poisson"

    peak: float = 255.0

    def __post_init__(self) -> None:
        require(self.peak > 0 and math.isfinite(self.peak), f"poisson peak must be > 0, got {self.peak}")


@dataclass(slots=True, frozen=True)
class PeriodicNoise:
    kind: ClassVar[str] = "periodic"

    amplitude: float = 50.0
    cycles_x: int = 8
    cycles_y: int = 8
    phase: float = 0.0

    def __post_init__(self) -> None:
        require(math.isfinite(self.amplitude), f"periodic amplitude must be finite, got {self.amplitude}")
        require(_is_count(self.cycles_x), f"periodic cycles_x must be an integer, got {self.cycles_x}")
        require(_is_count(self.cycles_y), f"periodic cycles_y must be an integer, got {self.cycles_y}")
        require(math.isfinite(self.phase), f"periodic phase must be finite, got {self.phase}")


@dataclass(slots=True, frozen=True)
class ErlangNoise:
    kind: ClassVar[str] = "erlang"

    a: float = 0.002
    b: int = 2

    def __post_init__(self) -> None:
        require(self.a > 0 and math.isfinite(self.a), f"erlang a must be > 0, got {self.a}")
        require(_is_count(self.b) and self.b >= 1, f"erlang b must be a positive integer, got {self.b}")


@dataclass(slots=True, frozen=True)
class ExponentialNoise:
    kind: ClassVar[str] = "exponential"

    a: float = 0.001

    def __post_init__(self) -> None:
        require(self.a > 0 and math.isfinite(self.a), f"exponential a must be > 0, got {self.a}")


@dataclass(slots=True, frozen=True)
class RayleighNoise:
    kind: ClassVar[str] = "rayleigh"

    a: float = 0.0
    b: float = 100.0

    def __post_init__(self) -> None:
        require(math.isfinite(self.a), f"rayleigh a must be finite, got {self.a}")
        require(self.b > 0 and math.isfinite(self.b), f"rayleigh b must be > 0, got {self.b}")


NoiseParams = Union[
    GaussianNoise,
    SaltPepperNoise,
    SpeckleNoise,
    PoissonNoise,
    PeriodicNoise,
    ErlangNoise,
    ExponentialNoise,
    RayleighNoise,
]

NOISE_PARAMS: dict[str, type] = {
    cls.kind: cls
    for cls in (
        GaussianNoise,
        SaltPepperNoise,
        SpeckleNoise,
        PoissonNoise,
        PeriodicNoise,
        ErlangNoise,
        ExponentialNoise,
        RayleighNoise,
    )
}


def _check_noise_kind(kind: str) -> None:
    if kind not in NOISE_PARAMS:
        raise ParameterError(f"unknown noise kind '{kind}'; expected one of {', '.join(NOISE_KINDS)}")


@dataclass(slots=True, frozen=True)
class NoiseSpec:
    kind: str
    params: NoiseParams
    clip: bool = True

    def __post_init__(self) -> None:
        _check_noise_kind(self.kind)
        if not isinstance(self.params, NOISE_PARAMS[self.kind]):
            raise ParameterError(f"noise kind '{self.kind}' cannot take {type(self.params).__name__}")

    @classmethod
    def default(cls, kind: str, clip: bool = True) -> NoiseSpec:
        return cls.from_overrides(kind, None, clip=clip)

    @classmethod
    def from_overrides(cls, kind: str, overrides: Mapping[str, Any] | None = None, clip: bool = True) -> NoiseSpec:
        _check_noise_kind(kind)
        return cls(kind=kind, params=build_params(NOISE_PARAMS[kind], overrides), clip=clip)

    def describe(self) -> str:
        return describe_params(self.params)


def _gaussian(rng: Rng, column: np.ndarray, params: GaussianNoise) -> np.ndarray:
    return column + sample_normal(rng, params.mu, params.sigma)


def _salt_pepper(rng: Rng, column: np.ndarray, params: SaltPepperNoise) -> np.ndarray:
    hit = uniform01(rng) < params.density
    salt = uniform01(rng) < params.salt_fraction
    return np.where(hit, np.where(salt, 255.0, 0.0), column)


def _speckle(rng: Rng, column: np.ndarray, params: SpeckleNoise) -> np.ndarray:
    k = params.stages
    if k == 0:
        return column.copy()
    return column * sample_gamma(rng, float(k), k)


def _poisson(rng: Rng, column: np.ndarray, params: PoissonNoise) -> np.ndarray:
    rates = np.maximum(column, 0.0) * params.peak / 255.0
    return sample_poisson(rng, rates) * 255.0 / params.peak


def _erlang(rng: Rng, column: np.ndarray, params: ErlangNoise) -> np.ndarray:
    return column + sample_gamma(rng, params.a, params.b)


def _exponential(rng: Rng, column: np.ndarray, params: ExponentialNoise) -> np.ndarray:
    return column + sample_exponential(rng, params.a)


def _rayleigh(rng: Rng, column: np.ndarray, params: RayleighNoise) -> np.ndarray:
    return column + sample_rayleigh(rng, params.a, params.b)


_PIXEL_NOISE: dict[str, Callable[[Rng, np.ndarray, Any], np.ndarray]] = {
    "gaussian": _gaussian,
    "salt_pepper": _salt_pepper,
    "speckle": _speckle,
    "poisson": _poisson,
    "erlang": _erlang,
    "exponential": _exponential,
    "rayleigh": _rayleigh,
}


def periodic_pattern(width: int, height: int, params: PeriodicNoise) -> np.ndarray:
    """The deterministic sinusoid added by periodic noise."""
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    angle = 2.0 * math.pi * (params.cycles_x * xs / width + params.cycles_y * ys / height) + params.phase
    return params.amplitude * np.sin(angle)


def apply_noise(img: ImageGrid, spec: NoiseSpec, seed: int) -> ImageGrid:
    seed = check_seed(seed)
    data = img.data

    if spec.kind == "periodic":
        noisy = data + periodic_pattern(img.width, img.height, spec.params)
    else:
        draw = _PIXEL_NOISE[spec.kind]
        rng = Rng.from_labels(seed, [f"row:{y}" for y in range(img.height)])
        noisy = np.empty_like(data)
        for x in range(img.width):
            noisy[:, x] = draw(rng, data[:, x], spec.params)

    if spec.clip:
        np.clip(noisy, 0.0, 255.0, out=noisy)
    return ImageGrid(noisy)
