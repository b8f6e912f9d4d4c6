"""Fidelity of a filtered image against its clean reference."""

from __future__ import annotations
import math
from dataclasses import dataclass

import numpy as np

from noisebench.utils.errors import ShapeMismatchError
from noisebench.utils.image_core import ImageGrid


PEAK_VALUE = 255.0


@dataclass(slots=True, frozen=True)
class PsnrValue:
    """PSNR in dB (``math.inf`` exactly when the MSE is zero) with the MSE it came from."""

    db: float
    mse: float

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.db)

    def format(self) -> str:
        """Report cell text: four decimals, or ``inf``."""
        return "inf" if self.is_infinite else f"{self.db:.4f}"


def _check_same_shape(a: ImageGrid, b: ImageGrid) -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"images differ in size: {a.width}x{a.height} vs {b.width}x{b.height}")


def mse(a: ImageGrid, b: ImageGrid) -> float:
    _check_same_shape(a, b)
    diff = a.data - b.data
    return float(np.mean(diff * diff))


def psnr(reference: ImageGrid, test: ImageGrid) -> PsnrValue:
    error = mse(reference, test)
    if error == 0:
        return PsnrValue(db=math.inf, mse=0.0)
    return PsnrValue(db=10.0 * math.log10(PEAK_VALUE * PEAK_VALUE / error), mse=error)
