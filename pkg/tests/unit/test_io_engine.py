import numpy as np
import pytest

from noisebench.utils.errors import SizeError, PgmParseError, ParameterError
from noisebench.pipeline.noise import NOISE_KINDS, NoiseSpec
from noisebench.utils.io_engine import (
    REPORT_HEADER,
    BenchReport,
    read_pgm,
    write_pgm,
    read_image,
    best_filter,
    write_image,
    write_report_csv,
    write_histogram_csv,
    render_markdown_report,
)
from noisebench.utils.metrics import PsnrValue
from noisebench.pipeline.filters import FILTER_KINDS
from noisebench.utils.image_core import ImageGrid, histogram


def test_read_simple_pgm():
    img = read_pgm(b"P5 2 2 255\n" + bytes([0, 128, 255, 7]))
    assert img == ImageGrid.from_rows([[0, 128], [255, 7]])


def test_read_pgm_with_comments_and_low_maxval():
    img = read_pgm(b"P5\n# made by hand\n3 1 # width height\n15\n" + bytes([1, 2, 15]))
    assert list(img.data[0]) == [1.0, 2.0, 15.0]


@pytest.mark.parametrize(
    "payload,field",
    [
        (b"P2 2 2 255\n" + bytes(4), "magic"),
        (b"P5 2 2 65535\n" + bytes(8), "maxval"),
        (b"P5 2 2 0\n" + bytes(4), "maxval"),
        (b"P5 2 x 255\n" + bytes(4), "height"),
        (b"P5 0 2 255\n", "width"),
        (b"P5 2 2 255\n" + bytes(3), "payload"),
        (b"P5 2 2", "maxval"),
        (b"", "magic"),
    ],
)
def test_pgm_parse_errors_name_the_field(payload, field):
    with pytest.raises(PgmParseError) as excinfo:
        read_pgm(payload)
    assert excinfo.value.field == field


def test_unsupported_magic_message():
    with pytest.raises(PgmParseError, match="unsupported magic"):
        read_pgm(b"P2 1 1 255\n0")


def test_truncated_payload_message():
    with pytest.raises(PgmParseError, match="truncated"):
        read_pgm(b"P5 4 4 255\n" + bytes(10))


def test_oversized_pgm_rejected():
    with pytest.raises(SizeError):
        read_pgm(b"P5 65536 65536 255\n")


def test_write_pgm_canonical_header_and_rounding():
    payload = write_pgm(ImageGrid.from_rows([[127.5, -4.0, 300.0]]))
    assert payload == b"P5\n3 1\n255\n" + bytes([128, 0, 255])


def test_pgm_write_read_write_is_stable():
    img = ImageGrid(np.random.default_rng(0).random((6, 9)) * 320 - 30)
    first = write_pgm(img)
    assert write_pgm(img) == first
    decoded = read_pgm(first)
    assert np.array_equal(decoded.data, np.clip(np.floor(np.clip(img.data, 0, 255) + 0.5), 0, 255))
    assert write_pgm(decoded) == first


def test_image_files_by_suffix(tmp_path):
    img = ImageGrid(np.arange(20, dtype=float).reshape(4, 5) * 12.3)
    write_image(tmp_path / "a.pgm", img)
    write_image(tmp_path / "a.png", img)
    from_pgm = read_image(tmp_path / "a.pgm")
    assert from_pgm == read_image(tmp_path / "a.png")
    assert from_pgm.shape == (4, 5)


def test_unknown_image_suffix(tmp_path):
    with pytest.raises(ParameterError):
        write_image(tmp_path / "a.jpg", ImageGrid.constant(1, 1, 0.0))
    with pytest.raises(ParameterError):
        read_image(tmp_path / "a.tiff")


def test_best_filter_ties_go_first():
    cells = {name: PsnrValue(db=10.0, mse=1.0) for name in FILTER_KINDS}
    assert best_filter(cells) == "median"
    cells["bilateral"] = PsnrValue(db=12.0, mse=1.0)
    cells["laplacian"] = PsnrValue(db=12.0, mse=1.0)
    assert best_filter(cells) == "bilateral"


def test_report_csv_layout(sample_report):
    lines = write_report_csv(sample_report).decode("utf-8").split("\n")
    assert lines[-1] == ""
    lines = lines[:-1]
    assert len(lines) == 9
    assert lines[0] == "noise,median,mean,wiener,gaussian,lowpass,highpass,bilateral,laplacian,best"
    assert lines[1] == "gaussian," + ",".join(["inf"] * 8) + ",median"
    assert [line.split(",")[0] for line in lines[1:]] == list(NOISE_KINDS)
    assert lines[2].split(",")[1:3] == ["20.0000", "30.0000"]
    assert lines[2].endswith(",mean")
    assert "\r" not in write_report_csv(sample_report).decode("utf-8")


def test_report_csv_four_decimal_rounding(sample_report):
    row = write_report_csv(sample_report).decode("utf-8").split("\n")[3].split(",")
    assert row[REPORT_HEADER.index("wiener")] == "20.0305"


def test_report_rows_are_reordered(sample_report):
    shuffled = BenchReport(
        image_id="x", seed=1, clip_mode=False, rows=tuple(reversed(sample_report.rows)), tool_version="t"
    )
    assert [row.noise.kind for row in shuffled.rows] == list(NOISE_KINDS)
    assert shuffled.row("poisson").noise == NoiseSpec.default("poisson")


def test_report_needs_every_noise_row(sample_report):
    with pytest.raises(ValueError):
        BenchReport(image_id="x", seed=1, clip_mode=True, rows=sample_report.rows[:7])


def test_histogram_csv():
    lines = write_histogram_csv(histogram(ImageGrid.constant(2, 2, 0.0))).decode("ascii").splitlines()
    assert len(lines) == 256
    assert lines[0] == "0,4"
    assert lines[255] == "255,0"
    assert sum(int(line.split(",")[1]) for line in lines) == 4


def test_markdown_reuses_csv_cells(sample_report):
    text = render_markdown_report(sample_report)
    assert text.startswith("# Noise filter benchmark: unit-test")
    assert "| median | mean | wiener | gaussian | lowpass | highpass | bilateral | laplacian |" in text
    assert "| gaussian | inf | inf | inf | inf | inf | inf | inf | inf | **median** |" in text
    assert "30.0000" in text
    assert "| Noise clipping | on |" in text
    assert "- **erlang**: a=0.002, b=2" in text
    assert text.endswith("\n")
