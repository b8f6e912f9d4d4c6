"""
Analytic densities of the noise models, for plotting against noisy-image histograms.

The density is that of the noise term itself: the additive variate for
gaussian, erlang, exponential, rayleigh and periodic noise, the mean-1 multiplier
for speckle, and the photon count pmf of a pixel at a given intensity for
poisson. Salt-and-pepper has no image-independent density.
"""

from __future__ import annotations
import math
from typing import Any
from pathlib import Path

import numpy as np
from loguru import logger

from noisebench.utils.errors import ParameterError
from noisebench.pipeline.noise import NoiseSpec


DEFAULT_POINTS = 512
DEFAULT_INTENSITY = 128.0


def _gaussian(z: np.ndarray, p: Any) -> np.ndarray:
    if p.sigma == 0:
        raise ParameterError("a gaussian with sigma = 0 has no density")
    return np.exp(-((z - p.mu) ** 2) / (2 * p.sigma**2)) / (math.sqrt(2 * math.pi) * p.sigma)


def _erlang_density(z: np.ndarray, rate: float, shape: int) -> np.ndarray:
    positive = np.maximum(z, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_density = shape * math.log(rate) + (shape - 1) * np.log(positive) - rate * positive - math.lgamma(shape)
    density = np.exp(log_density)
    if shape == 1:
        density = np.where(z == 0, rate, density)
    return np.where(z >= 0, density, 0.0)


def _rayleigh(z: np.ndarray, p: Any) -> np.ndarray:
    shifted = z - p.a
    density = (2.0 / p.b) * shifted * np.exp(-(shifted**2) / p.b)
    return np.where(shifted >= 0, density, 0.0)


def _periodic(z: np.ndarray, p: Any) -> np.ndarray:
    amplitude = abs(p.amplitude)
    if amplitude == 0:
        raise ParameterError("periodic noise with zero amplitude has no density")
    inside = np.abs(z) < amplitude
    safe = np.where(inside, amplitude**2 - z**2, 1.0)
    return np.where(inside, 1.0 / (math.pi * np.sqrt(safe)), 0.0)


def _poisson(z: np.ndarray, p: Any, intensity: float) -> np.ndarray:
    rate = max(intensity, 0.0) * p.peak / 255.0
    counts = np.round(z)
    valid = (counts >= 0) & (counts == z)
    log_factorial = np.array([math.lgamma(c + 1) if c >= 0 else 0.0 for c in counts])
    if rate == 0:
        return np.where(valid & (counts == 0), 1.0, 0.0)
    log_pmf = counts * math.log(rate) - rate - log_factorial
    return np.where(valid, np.exp(log_pmf), 0.0)


def noise_pdf(spec: NoiseSpec, z: np.ndarray, intensity: float = DEFAULT_INTENSITY) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    p = spec.params
    if spec.kind == "gaussian":
        return _gaussian(z, p)
    if spec.kind == "erlang":
        return _erlang_density(z, p.a, p.b)
    if spec.kind == "exponential":
        return _erlang_density(z, p.a, 1)
    if spec.kind == "rayleigh":
        return _rayleigh(z, p)
    if spec.kind == "speckle":
        if p.stages == 0:
            raise ParameterError("speckle with zero variance has no density")
        return _erlang_density(z, float(p.stages), p.stages)
    if spec.kind == "periodic":
        return _periodic(z, p)
    if spec.kind == "poisson":
        return _poisson(z, p, intensity)
    raise ParameterError(f"{spec.kind} noise has no image-independent density")


def default_support(spec: NoiseSpec, points: int = DEFAULT_POINTS, intensity: float = DEFAULT_INTENSITY) -> np.ndarray:
    """Sample points covering the bulk of the distribution."""
    p = spec.params
    if spec.kind == "gaussian":
        return np.linspace(p.mu - 4 * p.sigma, p.mu + 4 * p.sigma, points)
    if spec.kind == "erlang":
        return np.linspace(0.0, (p.b + 6 * math.sqrt(p.b)) / p.a, points)
    if spec.kind == "exponential":
        return np.linspace(0.0, 8.0 / p.a, points)
    if spec.kind == "rayleigh":
        return np.linspace(p.a, p.a + 4 * math.sqrt(p.b), points)
    if spec.kind == "speckle":
        return np.linspace(0.0, 1.0 + 6 * math.sqrt(max(p.variance, 1e-12)), points)
    if spec.kind == "periodic":
        return np.linspace(-abs(p.amplitude), abs(p.amplitude), points + 2)[1:-1]
    if spec.kind == "poisson":
        rate = max(intensity, 0.0) * p.peak / 255.0
        return np.arange(0, math.ceil(rate + 6 * math.sqrt(rate) + 1) + 1, dtype=np.float64)
    raise ParameterError(f"{spec.kind} noise has no image-independent density")


def density_csv(z: np.ndarray, density: np.ndarray) -> str:
    lines = ["z,density"]
    lines += [f"{a:.6f},{b:.10g}" for a, b in zip(z, density)]
    return "\n".join(lines) + "\n"


def run(*cli_args: str) -> None:
    """
    Usage:
        noisebench analyze noise_pdf KIND [OUT_CSV] [POINTS]

    Writes the analytic density of noise KIND at its default parameters as
    "z,density" CSV lines (to OUT_CSV, or the console when omitted).
    """
    if not cli_args:
        logger.error("No arguments provided. Usage: noisebench analyze noise_pdf KIND [OUT_CSV] [POINTS]")
        return

    kind = cli_args[0]
    points = int(cli_args[2]) if len(cli_args) > 2 and cli_args[2].isdigit() else DEFAULT_POINTS
    spec = NoiseSpec.default(kind)
    z = default_support(spec, points)
    text = density_csv(z, noise_pdf(spec, z))

    if len(cli_args) > 1:
        Path(cli_args[1]).write_text(text, encoding="utf-8", newline="\n")
        logger.success(f"Wrote {len(z)} density points for '{kind}' to {cli_args[1]}")
    else:
        print(text, end="")
