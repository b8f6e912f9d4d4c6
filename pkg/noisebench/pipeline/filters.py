"""
The eight denoising and enhancement filters.

Spatial filters pad with replicated edge pixels, so constant images are exact
fixed points. Frequency filters work on the centered spectrum and return
unclipped values; clipping is left to the caller.
"""

from __future__ import annotations
import math
from typing import Any, Union, Mapping, Callable, ClassVar
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from noisebench.utils.params import require, build_params, describe_params
from noisebench.utils.errors import ParameterError
from noisebench.utils.spectral import radial_distance, apply_frequency_response
from noisebench.utils.image_core import ImageGrid


FILTER_KINDS: tuple[str, ...] = (
    "median",
    "mean",
    "wiener",
    "gaussian",
    "lowpass",
    "highpass",
    "bilateral",
    "laplacian",
)

LAPLACIAN_MODES: tuple[str, ...] = ("raw", "abs", "sharpen")

LAPLACIAN_KERNEL = np.array([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]])


def _check_window(w: Any, kind: str) -> None:
    require(
        isinstance(w, (int, np.integer)) and not isinstance(w, bool) and w >= 1 and w % 2 == 1,
        f"{kind} window must be an odd integer >= 1, got {w}",
    )


def _check_positive(value: float, name: str) -> None:
    require(value > 0 and math.isfinite(value), f"{name} must be > 0, got {value}")


@dataclass(slots=True, frozen=True)
class MedianFilter:
    kind: ClassVar[str] = "median"

    window: int = 3

    def __post_init__(self) -> None:
        _check_window(self.window, self.kind)


@dataclass(slots=True, frozen=True)
class MeanFilter:
    kind: ClassVar[str] = "mean"

    window: int = 3

    def __post_init__(self) -> None:
        _check_window(self.window, self.kind)


@dataclass(slots=True, frozen=True)
class WienerFilter:
    kind: ClassVar[str] = "wiener"

    window: int = 3
    noise_var: float | None = None

    def __post_init__(self) -> None:
        _check_window(self.window, self.kind)
        if self.noise_var is not None:
            require(
                self.noise_var >= 0 and math.isfinite(self.noise_var),
                f"wiener noise_var must be >= 0, got {self.noise_var}",
            )


@dataclass(slots=True, frozen=True)
class GaussianFilter:
    kind: ClassVar[str] = "gaussian"

    sigma: float = 1.0

    def __post_init__(self) -> None:
        _check_positive(self.sigma, "gaussian sigma")


@dataclass(slots=True, frozen=True)
class LowpassFilter:
    kind: ClassVar[str] = "lowpass"

    cutoff: float = 40.0

    def __post_init__(self) -> None:
        _check_positive(self.cutoff, "lowpass cutoff")


@dataclass(slots=True, frozen=True)
class HighpassFilter:
    kind: ClassVar[str] = "highpass"

    cutoff: float = 40.0

    def __post_init__(self) -> None:
        _check_positive(self.cutoff, "highpass cutoff")


@dataclass(slots=True, frozen=True)
class BilateralFilter:
    kind: ClassVar[str] = "bilateral"

    sigma_s: float = 3.0
    sigma_r: float = 30.0

    def __post_init__(self) -> None:
        _check_positive(self.sigma_s, "bilateral sigma_s")
        _check_positive(self.sigma_r, "bilateral sigma_r")


@dataclass(slots=True, frozen=True)
class LaplacianFilter:
    kind: ClassVar[str] = "laplacian"

    mode: str = "raw"

    def __post_init__(self) -> None:
        require(
            self.mode in LAPLACIAN_MODES,
            f"laplacian mode must be one of {', '.join(LAPLACIAN_MODES)}, got {self.mode!r}",
        )


FilterParams = Union[
    MedianFilter,
    MeanFilter,
    WienerFilter,
    GaussianFilter,
    LowpassFilter,
    HighpassFilter,
    BilateralFilter,
    LaplacianFilter,
]

FILTER_PARAMS: dict[str, type] = {
    cls.kind: cls
    for cls in (
        MedianFilter,
        MeanFilter,
        WienerFilter,
        GaussianFilter,
        LowpassFilter,
        HighpassFilter,
        BilateralFilter,
        LaplacianFilter,
    )
}


def _check_filter_kind(kind: str) -> None:
    if kind not in FILTER_PARAMS:
        raise ParameterError(f"unknown filter kind '{kind}'; expected one of {', '.join(FILTER_KINDS)}")


@dataclass(slots=True, frozen=True)
class FilterSpec:
    kind: str
    params: FilterParams

    def __post_init__(self) -> None:
        _check_filter_kind(self.kind)
        if not isinstance(self.params, FILTER_PARAMS[self.kind]):
            raise ParameterError(f"filter kind '{self.kind}' cannot take {type(self.params).__name__}")

    @classmethod
    def default(cls, kind: str) -> FilterSpec:
        return cls.from_overrides(kind)

    @classmethod
    def from_overrides(cls, kind: str, overrides: Mapping[str, Any] | None = None) -> FilterSpec:
        _check_filter_kind(kind)
        return cls(kind=kind, params=build_params(FILTER_PARAMS[kind], overrides))

    def describe(self) -> str:
        return describe_params(self.params)


def median_filter(img: ImageGrid, w: int = 3) -> ImageGrid:
    _check_window(w, "median")
    if w == 1:
        return img
    return ImageGrid(ndimage.median_filter(img.data, size=w, mode="nearest"))


def mean_filter(img: ImageGrid, w: int = 3) -> ImageGrid:
    _check_window(w, "mean")
    if w == 1:
        return img
    return ImageGrid(ndimage.uniform_filter(img.data, size=w, mode="nearest"))


def local_statistics(data: np.ndarray, w: int) -> tuple[np.ndarray, np.ndarray]:
    """Local mean and population variance over w x w replicate-padded windows."""
    mean = ndimage.uniform_filter(data, size=w, mode="nearest")
    mean_of_squares = ndimage.uniform_filter(data * data, size=w, mode="nearest")
    return mean, np.maximum(mean_of_squares - mean * mean, 0.0)


def wiener_filter(img: ImageGrid, w: int = 3, noise_var: float | None = None) -> ImageGrid:
    """
    Locally adaptive Wiener estimate ``m + max(0, v - nu) / max(v, nu) * (x - m)``.

    ``m`` and ``v`` are the w x w local mean and variance. ``nu`` is the noise
    variance; when omitted it is estimated as the mean of all local variances.
    Pixels whose local variance does not exceed ``nu`` collapse to the local mean.
    """
    _check_window(w, "wiener")
    if noise_var is not None:
        require(noise_var >= 0, f"wiener noise_var must be >= 0, got {noise_var}")

    data = img.data
    mean, variance = local_statistics(data, w)
    nu = float(variance.mean()) if noise_var is None else float(noise_var)
    if nu == 0:
        return img

    gain = np.maximum(variance - nu, 0.0) / np.maximum(variance, nu)
    return ImageGrid(mean + gain * (data - mean))


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1D Gaussian of radius ceil(3 sigma); its outer product is the 2D kernel."""
    _check_positive(sigma, "gaussian sigma")
    radius = math.ceil(3 * sigma)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(offsets**2) / (2 * sigma * sigma))
    return kernel / kernel.sum()


def gaussian_filter(img: ImageGrid, sigma: float = 1.0) -> ImageGrid:
    kernel = gaussian_kernel(sigma)
    rows = ndimage.correlate1d(img.data, kernel, axis=1, mode="nearest")
    return ImageGrid(ndimage.correlate1d(rows, kernel, axis=0, mode="nearest"))


def lowpass_response(cutoff: float) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    _check_positive(cutoff, "lowpass cutoff")

    def response(du: np.ndarray, dv: np.ndarray) -> np.ndarray:
        distance = radial_distance(du, dv)
        return np.exp(-(distance**2) / (2 * cutoff * cutoff))

    return response


def highpass_response(cutoff: float) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    _check_positive(cutoff, "highpass cutoff")
    lowpass = lowpass_response(cutoff)

    def response(du: np.ndarray, dv: np.ndarray) -> np.ndarray:
        return 1.0 - lowpass(du, dv)

    return response


def lowpass_filter(img: ImageGrid, cutoff: float = 40.0) -> ImageGrid:
    return apply_frequency_response(img, lowpass_response(cutoff))


def highpass_filter(img: ImageGrid, cutoff: float = 40.0) -> ImageGrid:
    return apply_frequency_response(img, highpass_response(cutoff))


def bilateral_filter(img: ImageGrid, sigma_s: float = 3.0, sigma_r: float = 30.0) -> ImageGrid:
    """
    Brute-force bilateral filter over a (2r+1)^2 square window, r = ceil(3 sigma_s).

    Each neighbor q of p is weighted by exp(-|p-q|^2 / 2 sigma_s^2) * exp(-(I_p - I_q)^2 / 2 sigma_r^2)
    and the weights are normalized to sum to one per pixel.
    """
    _check_positive(sigma_s, "bilateral sigma_s")
    _check_positive(sigma_r, "bilateral sigma_r")

    data = img.data
    height, width = data.shape
    radius = math.ceil(3 * sigma_s)
    padded = np.pad(data, radius, mode="edge")

    weighted = np.zeros_like(data)
    norm = np.zeros_like(data)
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            spatial = math.exp(-(dx * dx + dy * dy) / (2 * sigma_s * sigma_s))
            neighbor = padded[radius + dy : radius + dy + height, radius + dx : radius + dx + width]
            weight = spatial * np.exp(-((neighbor - data) ** 2) / (2 * sigma_r * sigma_r))
            weighted += weight * neighbor
            norm += weight
    return ImageGrid(weighted / norm)


def laplacian_filter(img: ImageGrid, mode: str = "raw") -> ImageGrid:
    """
    Response to the 3x3 kernel [[0, 1, 0], [1, -4, 1], [0, 1, 0]] with replicate padding.

    ``raw`` returns the signed response, ``abs`` its magnitude and ``sharpen``
    the composite f - response. Nothing is clipped here.
    """
    require(mode in LAPLACIAN_MODES, f"laplacian mode must be one of {', '.join(LAPLACIAN_MODES)}, got {mode!r}")
    data = img.data
    p = np.pad(data, 1, mode="edge")
    response = p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:] - 4.0 * data
    if mode == "abs":
        response = np.abs(response)
    elif mode == "sharpen":
        response = data - response
    return ImageGrid(response)


_FILTERS: dict[str, Callable[[ImageGrid, Any], ImageGrid]] = {
    "median": lambda img, p: median_filter(img, p.window),
    "mean": lambda img, p: mean_filter(img, p.window),
    "wiener": lambda img, p: wiener_filter(img, p.window, p.noise_var),
    "gaussian": lambda img, p: gaussian_filter(img, p.sigma),
    "lowpass": lambda img, p: lowpass_filter(img, p.cutoff),
    "highpass": lambda img, p: highpass_filter(img, p.cutoff),
    "bilateral": lambda img, p: bilateral_filter(img, p.sigma_s, p.sigma_r),
    "laplacian": lambda img, p: laplacian_filter(img, p.mode),
}


def apply_filter(img: ImageGrid, spec: FilterSpec) -> ImageGrid:
    return _FILTERS[spec.kind](img, spec.params)
