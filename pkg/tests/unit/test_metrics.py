import math

import numpy as np
import pytest

from noisebench.utils.errors import ShapeMismatchError
from noisebench.utils.metrics import PsnrValue, mse, psnr
from noisebench.utils.image_core import ImageGrid


def test_mse_cases():
    a = ImageGrid(np.arange(12, dtype=float).reshape(3, 4))
    assert mse(a, a) == 0.0
    assert mse(a, ImageGrid(a.data + 1.0)) == 1.0

    single = np.zeros((2, 2))
    single[1, 0] = 255.0
    assert mse(ImageGrid.constant(2, 2, 0.0), ImageGrid(single)) == 16256.25


def test_mse_is_symmetric():
    rng = np.random.default_rng(0)
    a = ImageGrid(rng.random((5, 7)) * 300 - 20)
    b = ImageGrid(rng.random((5, 7)) * 300 - 20)
    assert mse(a, b) == mse(b, a)


def test_identical_images_are_infinite():
    img = ImageGrid.constant(3, 3, 10.0)
    value = psnr(img, img)
    assert value.is_infinite
    assert value.db == math.inf
    assert value.format() == "inf"


def test_closed_form_values():
    img = ImageGrid.constant(4, 4, 100.0)
    assert psnr(img, ImageGrid(img.data + 1.0)).db == pytest.approx(48.1308, abs=1e-4)
    assert psnr(img, ImageGrid(img.data + 1.0)).db == pytest.approx(20 * math.log10(255), abs=1e-6)

    single = np.zeros((2, 2))
    single[0, 0] = 255.0
    assert psnr(ImageGrid.constant(2, 2, 0.0), ImageGrid(single)).db == pytest.approx(10 * math.log10(4), abs=1e-6)


def test_psnr_goes_negative_past_full_scale_error():
    ref = ImageGrid.constant(2, 2, 0.0)
    assert psnr(ref, ImageGrid.constant(2, 2, 255.0)).db == pytest.approx(0.0, abs=1e-12)
    assert psnr(ref, ImageGrid.constant(2, 2, 1000.0)).db < 0


def test_psnr_decreases_with_error():
    ref = ImageGrid.constant(3, 3, 50.0)
    values = [psnr(ref, ImageGrid(ref.data + offset)).db for offset in (0.5, 1.0, 4.0, 300.0)]
    assert values == sorted(values, reverse=True)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        psnr(ImageGrid.constant(2, 3, 0.0), ImageGrid.constant(3, 2, 0.0))


def test_format_four_decimals():
    assert PsnrValue(db=26.15264, mse=1.0).format() == "26.1526"
    assert PsnrValue(db=-3.5, mse=1.0).format() == "-3.5000"
