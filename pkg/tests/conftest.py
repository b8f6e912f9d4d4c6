import math

import pytest

from noisebench.utils.metrics import PsnrValue
from noisebench.pipeline.noise import NOISE_KINDS, NoiseSpec
from noisebench.utils.io_engine import BenchRow, BenchReport
from noisebench.pipeline.filters import FILTER_KINDS


def make_report(cell_db, clip_mode=True, seed=42, image_id="unit-test"):
    """BenchReport whose cells are ``cell_db(noise_kind, filter_kind)`` in dB."""
    rows = []
    for noise in NOISE_KINDS:
        cells = {}
        for name in FILTER_KINDS:
            db = cell_db(noise, name)
            cells[name] = PsnrValue(db=db, mse=0.0 if math.isinf(db) else 255.0**2 / 10 ** (db / 10))
        rows.append(BenchRow(noise=NoiseSpec.default(noise), cells=cells))
    return BenchReport(image_id=image_id, seed=seed, clip_mode=clip_mode, rows=tuple(rows), tool_version="test")


@pytest.fixture
def sample_report():
    # mean wins every row except gaussian, which is all-infinite
    def cell_db(noise, name):
        if noise == "gaussian":
            return math.inf
        return 30.0 if name == "mean" else 20.0 + FILTER_KINDS.index(name) * 0.015264

    return make_report(cell_db)
