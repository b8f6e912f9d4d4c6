"""
2D discrete Fourier transform and centered frequency-response filtering.

Transforms run row-then-column over a 1D FFT: iterative radix-2
decimation-in-time for power-of-two lengths, Bluestein's chirp-z convolution for
everything else, so odd and prime sizes are exact without padding the image.
"""

from __future__ import annotations
import math
from typing import Callable
from dataclasses import dataclass

import numpy as np

from noisebench.utils.errors import SizeError, ParameterError, SpectralConsistencyError
from noisebench.utils.image_core import ImageGrid, check_dimensions


IMAGINARY_RESIDUE_TOLERANCE = 1e-8

FrequencyResponse = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(slots=True, frozen=True)
class ComplexGrid:
    """Immutable complex spectrum laid out like ``ImageGrid`` (``data[v, u]``)."""

    data: np.ndarray

    def __post_init__(self) -> None:
        array = np.array(self.data, dtype=np.complex128, copy=True)
        if array.ndim != 2:
            raise SizeError(f"spectrum data must be two-dimensional, got shape {array.shape}")
        check_dimensions(array.shape[1], array.shape[0])
        if not np.all(np.isfinite(array)):
            raise ParameterError("spectrum contains NaN or infinite values")
        array.setflags(write=False)
        object.__setattr__(self, "data", array)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


def _is_power_of_two(n: int) -> bool:
    return n & (n - 1) == 0


def _next_power_of_two(n: int) -> int:
    return 1 << (n - 1).bit_length()


def _bit_reversed(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    indices = np.arange(n)
    reversed_indices = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        reversed_indices = (reversed_indices << 1) | (indices & 1)
        indices = indices >> 1
    return reversed_indices


def _radix2(x: np.ndarray) -> np.ndarray:
    """Forward FFT along the last axis of a (batch, n) array, n a power of two."""
    batch, n = x.shape
    a = x[:, _bit_reversed(n)]
    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(-2j * math.pi * np.arange(half) / size)
        blocks = a.reshape(batch, n // size, size)
        even = blocks[..., :half]
        odd = blocks[..., half:] * twiddle
        a = np.concatenate([even + odd, even - odd], axis=-1).reshape(batch, n)
        size *= 2
    return a


def _inverse_radix2(x: np.ndarray) -> np.ndarray:
    return np.conj(_radix2(np.conj(x))) / x.shape[-1]


def _bluestein(x: np.ndarray) -> np.ndarray:
    """Forward DFT of any length as a power-of-two circular convolution with a chirp."""
    batch, n = x.shape
    k = np.arange(n, dtype=np.int64)
    chirp = np.exp(-1j * math.pi * ((k * k) % (2 * n)) / n)
    m = _next_power_of_two(2 * n - 1)

    a = np.zeros((batch, m), dtype=np.complex128)
    a[:, :n] = x * chirp
    b = np.zeros(m, dtype=np.complex128)
    b[:n] = np.conj(chirp)
    if n > 1:
        b[m - n + 1 :] = np.conj(chirp[1:])[::-1]

    convolved = _inverse_radix2(_radix2(a) * _radix2(b[np.newaxis, :]))
    return convolved[:, :n] * chirp


def fft1d(x: np.ndarray) -> np.ndarray:
    """Unnormalized forward DFT along the last axis."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[-1]
    flat = x.reshape(-1, n)
    out = _radix2(flat) if _is_power_of_two(n) else _bluestein(flat)
    return out.reshape(x.shape)


def ifft1d(x: np.ndarray) -> np.ndarray:
    """Inverse DFT along the last axis, normalized by 1/n."""
    x = np.asarray(x, dtype=np.complex128)
    return np.conj(fft1d(np.conj(x))) / x.shape[-1]


def _fft2(data: np.ndarray) -> np.ndarray:
    rows = fft1d(data)
    return fft1d(rows.T).T


def _hermitian_part(spectrum: np.ndarray) -> np.ndarray:
    """Project a spectrum onto X[u, v] = conj(X[-u, -v]), the exact symmetry of a real image's transform."""
    mirrored = np.roll(spectrum[::-1, ::-1], (1, 1), axis=(0, 1))
    return (spectrum + np.conj(mirrored)) / 2


def _real_fft2(data: np.ndarray) -> np.ndarray:
    return _hermitian_part(_fft2(data))


def fft2d(img: ImageGrid) -> ComplexGrid:
    return ComplexGrid(_real_fft2(img.data))


def ifft2d(spectrum: ComplexGrid) -> ImageGrid:
    """Real part of the normalized inverse transform; rejects spectra of non-real images."""
    height, width = spectrum.data.shape
    conj = np.conj(spectrum.data)
    values = np.conj(_fft2(conj)) / (width * height)
    # mean spectral magnitude bounds every output sample, near-zero outputs included
    scale = float(np.sum(np.abs(spectrum.data))) / (width * height)
    residue = float(np.max(np.abs(values.imag)))
    if residue > IMAGINARY_RESIDUE_TOLERANCE * scale:
        raise SpectralConsistencyError(
            f"inverse transform left an imaginary residue of {residue:.3e} (spectral scale {scale:.3e})"
        )
    return ImageGrid(values.real)


def centered_offsets(width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    """Frequency offsets (du, dv) of every cell of a centered spectrum, DC at (width // 2, height // 2)."""
    dv, du = np.mgrid[0:height, 0:width]
    return (du - width // 2).astype(np.float64), (dv - height // 2).astype(np.float64)


def center_shift(data: np.ndarray) -> np.ndarray:
    height, width = data.shape
    return np.roll(data, (height // 2, width // 2), axis=(0, 1))


def uncenter_shift(data: np.ndarray) -> np.ndarray:
    height, width = data.shape
    return np.roll(data, (-(height // 2), -(width // 2)), axis=(0, 1))


def apply_frequency_response(img: ImageGrid, response: FrequencyResponse) -> ImageGrid:
    """
    Multiply the centered spectrum of ``img`` by ``response(du, dv)`` and invert.

    ``response`` receives the centered offset arrays and must return a finite real
    array of the image's shape (or a scalar). The output is not clipped.
    """
    spectrum = center_shift(_real_fft2(img.data))
    du, dv = centered_offsets(img.width, img.height)
    gain = np.broadcast_to(np.asarray(response(du, dv), dtype=np.float64), spectrum.shape)
    if not np.all(np.isfinite(gain)):
        raise ParameterError("frequency response produced non-finite values")
    return ifft2d(ComplexGrid(uncenter_shift(spectrum * gain)))


def radial_distance(du: np.ndarray, dv: np.ndarray) -> np.ndarray:
    return np.sqrt(du * du + dv * dv)
