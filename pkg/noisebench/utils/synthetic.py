"""Procedural 256x256 test image: smooth gradients, step edges and a fine texture patch. No randomness."""

from __future__ import annotations
import math

import numpy as np

from noisebench.utils.image_core import ImageGrid


SYNTHETIC_SIZE = 256
SYNTHETIC_IMAGE_ID = "synthetic-256"


def synthetic_test_image() -> ImageGrid:
    size = SYNTHETIC_SIZE
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)

    # base level, two linear gradients and a slow sinusoidal undulation
    v = 60.0 + 40.0 * (x / (size - 1) - 0.5) + 20.0 * (y / (size - 1) - 0.5)
    v += 12.0 * np.sin(2 * math.pi * x / 128) * np.cos(2 * math.pi * y / 96)

    # step edges
    v += np.where((x >= 32) & (x < 112) & (y >= 24) & (y < 88), 70.0, 0.0)
    v -= np.where((x >= 150) & (x < 230) & (y >= 40) & (y < 120), 50.0, 0.0)
    v += np.where((x - 80) ** 2 + (y - 180) ** 2 < 40**2, 60.0, 0.0)

    # one-pixel checkerboard texture
    checker = np.where((x + y) % 2 == 1, 45.0, -45.0)
    v += np.where((x >= 100) & (x < 238) & (y >= 100) & (y < 238), checker, 0.0)

    return ImageGrid(np.clip(v, 0.0, 255.0))
