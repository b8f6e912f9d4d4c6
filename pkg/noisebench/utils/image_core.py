"""
Image representation shared by every noisebench module.

Pixels are 64-bit floats in a (height, width) numpy array. Values may leave the
nominal [0, 255] display range while noise is unclipped; they are quantized to
8-bit only when binned into a histogram or written to disk.
"""

from __future__ import annotations
from typing import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from noisebench.utils.errors import SizeError, ParameterError


MAX_PIXELS = 1 << 28
HISTOGRAM_BINS = 256


def round_half_away(values: np.ndarray | float) -> np.ndarray:
    """Round to the nearest integer, halves away from zero (0.5 -> 1, -0.5 -> -1)."""
    values = np.asarray(values, dtype=np.float64)
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def check_dimensions(width: int, height: int) -> None:
    if width < 1 or height < 1:
        raise SizeError(f"image dimensions must be positive, got {width}x{height}")
    if width * height > MAX_PIXELS:
        raise SizeError(f"image of {width}x{height} exceeds the {MAX_PIXELS} pixel limit")


@dataclass(slots=True, frozen=True)
class ImageGrid:
    """Immutable grayscale image; ``data[y, x]`` is the intensity at column x, row y."""

    data: np.ndarray

    def __post_init__(self) -> None:
        array = np.array(self.data, dtype=np.float64, copy=True)
        if array.ndim != 2:
            raise SizeError(f"image data must be two-dimensional, got shape {array.shape}")
        check_dimensions(array.shape[1], array.shape[0])
        if not np.all(np.isfinite(array)):
            raise ParameterError("image data contains NaN or infinite values")
        array.setflags(write=False)
        object.__setattr__(self, "data", array)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> ImageGrid:
        return cls(np.asarray(rows, dtype=np.float64))

    @classmethod
    def from_flat(cls, width: int, height: int, values: Iterable[float]) -> ImageGrid:
        check_dimensions(width, height)
        flat = np.fromiter(values, dtype=np.float64)
        if flat.size != width * height:
            raise SizeError(f"expected {width * height} values for a {width}x{height} image, got {flat.size}")
        return cls(flat.reshape(height, width))

    @classmethod
    def constant(cls, width: int, height: int, value: float) -> ImageGrid:
        check_dimensions(width, height)
        return cls(np.full((height, width), float(value)))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ImageGrid):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))


@dataclass(slots=True, frozen=True)
class Histogram:
    """Counts of clipped, rounded intensities over 256 bins."""

    bins: np.ndarray
    total: int

    def __post_init__(self) -> None:
        bins = np.array(self.bins, dtype=np.int64, copy=True)
        if bins.shape != (HISTOGRAM_BINS,):
            raise ParameterError(f"histogram needs {HISTOGRAM_BINS} bins, got shape {bins.shape}")
        if np.any(bins < 0):
            raise ParameterError("histogram counts must be non-negative")
        if int(bins.sum()) != self.total:
            raise ParameterError(f"histogram bins sum to {int(bins.sum())}, total says {self.total}")
        bins.setflags(write=False)
        object.__setattr__(self, "bins", bins)


def clip_to_byte_range(img: ImageGrid) -> ImageGrid:
    return ImageGrid(np.clip(img.data, 0.0, 255.0))


def quantize(img: ImageGrid) -> np.ndarray:
    """8-bit pixel values as written to disk and counted by ``histogram``."""
    return round_half_away(np.clip(img.data, 0.0, 255.0)).astype(np.uint8)


def histogram(img: ImageGrid) -> Histogram:
    counts = np.bincount(quantize(img).ravel(), minlength=HISTOGRAM_BINS)
    return Histogram(bins=counts, total=img.width * img.height)
