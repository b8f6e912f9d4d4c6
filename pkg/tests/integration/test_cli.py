import sys

import numpy as np
import pytest
from loguru import logger
from typer.testing import CliRunner

from noisebench.main import app, exit_code_for
from noisebench import main as cli
from noisebench.utils.errors import (
    SizeError,
    PgmParseError,
    BenchCellError,
    ParameterError,
    ShapeMismatchError,
    SpectralConsistencyError,
)
from noisebench.utils.io_engine import read_pgm, write_pgm
from noisebench.utils.synthetic import synthetic_test_image
from noisebench.utils.image_core import ImageGrid


runner = CliRunner()


@pytest.fixture(autouse=True)
def restore_logging():
    yield
    logger.remove()
    logger.add(sys.stderr)


@pytest.fixture
def small_pgm(tmp_path):
    path = tmp_path / "small.pgm"
    path.write_bytes(write_pgm(ImageGrid(synthetic_test_image().data[20:52, 20:60])))
    return path


def test_exit_code_mapping():
    assert exit_code_for(ParameterError("x")) == 2
    assert exit_code_for(ShapeMismatchError("x")) == 2
    assert exit_code_for(SizeError("x")) == 2
    assert exit_code_for(PgmParseError("magic", "x")) == 3
    assert exit_code_for(FileNotFoundError("x")) == 3
    assert exit_code_for(BenchCellError("gaussian", "median", PgmParseError("payload", "x"))) == 3
    assert exit_code_for(BenchCellError("gaussian", None, ParameterError("x"))) == 2
    assert exit_code_for(SpectralConsistencyError("x")) == 2
    assert exit_code_for(BenchCellError("gaussian", "highpass", SpectralConsistencyError("x"))) == 2


def test_synth_writes_test_image(tmp_path):
    out = tmp_path / "synthetic.pgm"
    result = runner.invoke(app, ["synth", "--out", str(out)])
    assert result.exit_code == 0
    assert read_pgm(out.read_bytes()).shape == (256, 256)


def test_noise_then_filter_then_psnr(tmp_path, small_pgm):
    noisy = tmp_path / "noisy.pgm"
    cleaned = tmp_path / "cleaned.png"

    result = runner.invoke(
        app, ["noise", "--in", str(small_pgm), "--out", str(noisy), "--kind", "salt_pepper", "--density", "0.1"]
    )
    assert result.exit_code == 0
    result = runner.invoke(
        app, ["filter", "--in", str(noisy), "--out", str(cleaned), "--kind", "median", "--window", "3"]
    )
    assert result.exit_code == 0
    assert cleaned.exists()

    result = runner.invoke(app, ["psnr", "--ref", str(small_pgm), "--in", str(small_pgm)])
    assert result.exit_code == 0
    assert "inf" in result.stdout


def test_noise_is_seeded(tmp_path, small_pgm):
    outputs = []
    for name in ("a.pgm", "b.pgm"):
        out = tmp_path / name
        args = ["noise", "--in", str(small_pgm), "--out", str(out), "--kind", "gaussian", "--sigma", "15", "--seed", "3"]
        assert runner.invoke(app, args).exit_code == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_erlang_shape_flag_accepts_integral_value(tmp_path, small_pgm):
    out = tmp_path / "erlang.pgm"
    args = ["noise", "--in", str(small_pgm), "--out", str(out), "--kind", "erlang", "--a", "0.05", "--b", "3"]
    assert runner.invoke(app, args).exit_code == 0


@pytest.mark.parametrize(
    "args",
    [
        ["noise", "--kind", "erlang", "--sigma", "3"],
        ["noise", "--kind", "pink"],
        ["noise", "--kind", "gaussian", "--sigma", "-1"],
        ["filter", "--kind", "median", "--window", "2"],
        ["filter", "--kind", "laplacian", "--laplacian-mode", "sobel"],
    ],
)
def test_parameter_errors_exit_2(tmp_path, small_pgm, args):
    command, *rest = args
    result = runner.invoke(app, [command, "--in", str(small_pgm), "--out", str(tmp_path / "o.pgm"), *rest])
    assert result.exit_code == 2


def test_unsupported_output_suffix_exits_2(tmp_path, small_pgm):
    result = runner.invoke(
        app, ["filter", "--in", str(small_pgm), "--out", str(tmp_path / "o.jpg"), "--kind", "mean"]
    )
    assert result.exit_code == 2


def test_psnr_size_mismatch_exits_2(tmp_path, small_pgm):
    other = tmp_path / "other.pgm"
    other.write_bytes(write_pgm(ImageGrid(np.zeros((5, 5)))))
    assert runner.invoke(app, ["psnr", "--ref", str(small_pgm), "--in", str(other)]).exit_code == 2


def test_missing_input_exits_3(tmp_path):
    result = runner.invoke(
        app, ["filter", "--in", str(tmp_path / "absent.pgm"), "--out", str(tmp_path / "o.pgm"), "--kind", "mean"]
    )
    assert result.exit_code == 3


def test_malformed_pgm_exits_3(tmp_path):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P2\n2 2\n255\n0 0 0 0\n")
    assert runner.invoke(app, ["hist", "--in", str(bad)]).exit_code == 3


def test_missing_required_flag_is_usage_error():
    assert runner.invoke(app, ["noise", "--in", "x.pgm"]).exit_code == 2


def test_hist_writes_256_lines(tmp_path, small_pgm):
    out = tmp_path / "hist.csv"
    assert runner.invoke(app, ["hist", "--in", str(small_pgm), "--out", str(out)]).exit_code == 0
    lines = out.read_text(encoding="ascii").splitlines()
    assert len(lines) == 256
    assert sum(int(line.split(",")[1]) for line in lines) == 32 * 40


def test_bench_writes_reports(tmp_path, small_pgm):
    csv_path = tmp_path / "report.csv"
    md_path = tmp_path / "report.md"
    result = runner.invoke(
        app,
        [
            "bench",
            "--in",
            str(small_pgm),
            "--out",
            str(csv_path),
            "--markdown",
            str(md_path),
            "--threads",
            "2",
            "--noise-param",
            "gaussian.sigma=10",
            "--filter-param",
            "bilateral.sigma_r=20",
        ],
    )
    assert result.exit_code == 0
    lines = csv_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 9
    assert lines[0].startswith("noise,median,mean")
    assert "sigma=10" in md_path.read_text(encoding="utf-8")


def test_bench_reads_config_and_flags_win(tmp_path, small_pgm):
    config = tmp_path / "bench.yaml"
    config.write_text(
        f"input: {small_pgm}\nseed: 5\nclip: false\noutputs:\n  csv: {tmp_path / 'from_config.csv'}\n",
        encoding="utf-8",
    )
    result = runner.invoke(app, ["bench", "--config", str(config), "--out", str(tmp_path / "flag.csv")])
    assert result.exit_code == 0
    assert (tmp_path / "flag.csv").exists()
    assert not (tmp_path / "from_config.csv").exists()


@pytest.mark.parametrize(
    "extra",
    [
        ["--noise-param", "gaussian.bogus=1"],
        ["--noise-param", "gaussian"],
        ["--filter-param", "sobel.size=3"],
        ["--seed", "-4"],
    ],
)
def test_bench_parameter_errors_exit_2(small_pgm, extra):
    assert runner.invoke(app, ["bench", "--in", str(small_pgm), *extra]).exit_code == 2


def test_analyze_noise_pdf(tmp_path):
    out = tmp_path / "rayleigh.csv"
    result = runner.invoke(app, ["analyze", "noise_pdf", "rayleigh", str(out), "64"])
    assert result.exit_code == 0
    assert out.read_text(encoding="utf-8").startswith("z,density\n")


def test_analyze_unknown_module_fails():
    assert runner.invoke(app, ["analyze", "no_such_analysis"]).exit_code == 1


def test_analyze_salt_pepper_density_is_a_parameter_error(tmp_path):
    result = runner.invoke(app, ["analyze", "noise_pdf", "salt_pepper", str(tmp_path / "sp.csv")])
    assert result.exit_code == 2


def test_highpass_of_constant_image(tmp_path):
    flat = tmp_path / "flat.pgm"
    flat.write_bytes(write_pgm(ImageGrid.constant(30, 20, 128.0)))
    out = tmp_path / "edges.pgm"
    result = runner.invoke(app, ["filter", "--in", str(flat), "--out", str(out), "--kind", "highpass"])
    assert result.exit_code == 0
    assert not read_pgm(out.read_bytes()).data.any()


def test_spectral_failure_exits_2(tmp_path, small_pgm, monkeypatch):
    def inconsistent(img, spec):
        raise SpectralConsistencyError("imaginary residue above tolerance")

    monkeypatch.setattr(cli, "apply_filter", inconsistent)
    result = runner.invoke(
        app, ["filter", "--in", str(small_pgm), "--out", str(tmp_path / "o.pgm"), "--kind", "lowpass"]
    )
    assert result.exit_code == 2
    assert not (tmp_path / "o.pgm").exists()


def test_overflowing_noise_exits_2(tmp_path, small_pgm):
    args = ["--kind", "gaussian", "--mu", "1.5e308", "--sigma", "1e308", "--no-clip"]
    result = runner.invoke(app, ["noise", "--in", str(small_pgm), "--out", str(tmp_path / "o.pgm"), *args])
    assert result.exit_code == 2


def test_bench_config_with_quoted_clip_exits_2(tmp_path, small_pgm):
    config = tmp_path / "bench.yaml"
    config.write_text(f'input: {small_pgm}\nclip: "false"\n', encoding="utf-8")
    assert runner.invoke(app, ["bench", "--config", str(config)]).exit_code == 2
