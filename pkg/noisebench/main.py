#!/usr/bin/env python3
"""NoiseBench CLI - noise models, denoising filters and PSNR benchmarks for grayscale images."""

from __future__ import annotations
import sys
from typing import Any, Iterator, Optional
from pathlib import Path
from contextlib import contextmanager

import typer
from dotenv import load_dotenv
from loguru import logger
from rich.table import Table
from rich.console import Console

from noisebench.analysis import run_analysis
from noisebench.utils.errors import (
    SizeError,
    PgmParseError,
    BenchCellError,
    ParameterError,
    NoiseBenchError,
    ShapeMismatchError,
    SpectralConsistencyError,
)
from noisebench.utils.metrics import psnr
from noisebench.pipeline.noise import NoiseSpec, apply_noise
from noisebench.utils.io_engine import BenchReport, read_image, write_image, write_histogram_csv
from noisebench.pipeline.filters import FilterSpec, apply_filter
from noisebench.pipeline.handler import BenchPlan, run_benchmark
from noisebench.utils.synthetic import synthetic_test_image
from noisebench.utils.image_core import histogram
from noisebench.utils.loading_engine import load_config, merge_overrides, parse_param_overrides


load_dotenv()

EXIT_PARAMETER_ERROR = 2
EXIT_IO_ERROR = 3

app = typer.Typer(
    name="noisebench",
    help="NoiseBench - inject noise, apply denoising filters and score them with PSNR.",
    pretty_exceptions_show_locals=False,
)
console = Console()


def _configure_logging(debug: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if debug else "INFO")


def exit_code_for(exc: BaseException) -> int:
    """Exit status for a failure: 2 for parameter and numeric errors, 3 for I/O and parse errors."""
    if isinstance(exc, BenchCellError):
        return exit_code_for(exc.cause)
    if isinstance(exc, (PgmParseError, OSError)):
        return EXIT_IO_ERROR
    if isinstance(exc, (ParameterError, ShapeMismatchError, SizeError, SpectralConsistencyError)):
        return EXIT_PARAMETER_ERROR
    return 1


@contextmanager
def _cli_errors(command: str) -> Iterator[None]:
    try:
        yield
    except (NoiseBenchError, OSError) as exc:
        logger.error(f"{command} failed: {exc}")
        raise typer.Exit(exit_code_for(exc)) from exc


def _given(**values: Any) -> dict[str, Any]:
    return {name: value for name, value in values.items() if value is not None}


@app.command()
def noise(
    input_path: Path = typer.Option(..., "--in", help="Clean input image (.pgm or .png)"),
    output_path: Path = typer.Option(..., "--out", help="Where to write the noisy image"),
    kind: str = typer.Option(..., "--kind", help="Noise kind, e.g. gaussian or salt_pepper"),
    seed: int = typer.Option(42, "--seed", help="Seed for the noise stream"),
    no_clip: bool = typer.Option(False, "--no-clip", help="Keep out-of-range values (lost again at 8-bit output)"),
    mu: Optional[float] = typer.Option(None, "--mu"),
    sigma: Optional[float] = typer.Option(None, "--sigma"),
    density: Optional[float] = typer.Option(None, "--density"),
    salt_fraction: Optional[float] = typer.Option(None, "--salt-fraction"),
    variance: Optional[float] = typer.Option(None, "--variance"),
    peak: Optional[float] = typer.Option(None, "--peak"),
    amplitude: Optional[float] = typer.Option(None, "--amplitude"),
    cycles_x: Optional[int] = typer.Option(None, "--cycles-x"),
    cycles_y: Optional[int] = typer.Option(None, "--cycles-y"),
    phase: Optional[float] = typer.Option(None, "--phase"),
    a: Optional[float] = typer.Option(None, "--a", help="Erlang/exponential rate or Rayleigh location"),
    b: Optional[float] = typer.Option(None, "--b", help="Erlang shape or Rayleigh scale"),
    debug: bool = typer.Option(False, "--debug", help="Enable debug logging"),
) -> None:
    """Add one noise model to an image."""
    _configure_logging(debug)
    overrides = _given(
        mu=mu,
        sigma=sigma,
        density=density,
        salt_fraction=salt_fraction,
        variance=variance,
        peak=peak,
        amplitude=amplitude,
        cycles_x=cycles_x,
        cycles_y=cycles_y,
        phase=phase,
        a=a,
        b=b,
    )
    with _cli_errors("noise"):
        spec = NoiseSpec.from_overrides(kind, overrides, clip=not no_clip)
        logger.debug(f"Applying {spec.describe()} with seed {seed}")
        noisy = apply_noise(read_image(input_path), spec, seed)
        write_image(output_path, noisy)
    logger.success(f"Wrote {kind} noisy image to {output_path}")


@app.command("filter")
def filter_image(
    input_path: Path = typer.Option(..., "--in", help="Noisy input image (.pgm or .png)"),
    output_path: Path = typer.Option(..., "--out", help="Where to write the filtered image"),
    kind: str = typer.Option(..., "--kind", help="Filter kind, e.g. median or wiener"),
    window: Optional[int] = typer.Option(None, "--window", help="Odd window size (median, mean, wiener)"),
    sigma: Optional[float] = typer.Option(None, "--sigma", help="Gaussian smoothing sigma"),
    cutoff: Optional[float] = typer.Option(None, "--cutoff", help="Frequency cutoff D0 (lowpass, highpass)"),
    sigma_s: Optional[float] = typer.Option(None, "--sigma-s", help="Bilateral spatial sigma"),
    sigma_r: Optional[float] = typer.Option(None, "--sigma-r", help="Bilateral range sigma"),
    noise_var: Optional[float] = typer.Option(None, "--noise-var", help="Wiener noise variance"),
    laplacian_mode: Optional[str] = typer.Option(None, "--laplacian-mode", help="raw, abs or sharpen"),
    debug: bool = typer.Option(False, "--debug", help="Enable debug logging"),
) -> None:
    """Run one denoising filter over an image."""
    _configure_logging(debug)
    overrides = _given(
        window=window,
        sigma=sigma,
        cutoff=cutoff,
        sigma_s=sigma_s,
        sigma_r=sigma_r,
        noise_var=noise_var,
        mode=laplacian_mode,
    )
    with _cli_errors("filter"):
        spec = FilterSpec.from_overrides(kind, overrides)
        logger.debug(f"Applying {spec.describe()}")
        write_image(output_path, apply_filter(read_image(input_path), spec))
    logger.success(f"Wrote {kind}-filtered image to {output_path}")


@app.command("psnr")
def psnr_command(
    reference_path: Path = typer.Option(..., "--ref", help="Reference (clean) image"),
    input_path: Path = typer.Option(..., "--in", help="Image to score"),
    debug: bool = typer.Option(False, "--debug", help="Enable debug logging"),
) -> None:
    """Print the PSNR (dB) and MSE of an image against a reference."""
    _configure_logging(debug)
    with _cli_errors("psnr"):
        value = psnr(read_image(reference_path), read_image(input_path))
    console.print(f"PSNR: {value.format()} dB  (MSE: {value.mse:.6f})")


@app.command()
def hist(
    input_path: Path = typer.Option(..., "--in", help="Image to bin"),
    output_path: Optional[Path] = typer.Option(None, "--out", help="Histogram CSV path (printed when omitted)"),
    debug: bool = typer.Option(False, "--debug", help="Enable debug logging"),
) -> None:
    """Write the 256-bin intensity histogram of an image as CSV."""
    _configure_logging(debug)
    with _cli_errors("hist"):
        payload = write_histogram_csv(histogram(read_image(input_path)))
        if output_path is None:
            sys.stdout.write(payload.decode("ascii"))
            return
        output_path.write_bytes(payload)
    logger.success(f"Wrote histogram to {output_path}")


@app.command()
def synth(
    output_path: Path = typer.Option(..., "--out", help="Where to write the synthetic 256x256 test image"),
) -> None:
    """Write the procedural test image used when bench gets no --in."""
    with _cli_errors("synth"):
        write_image(output_path, synthetic_test_image())
    logger.success(f"Wrote synthetic test image to {output_path}")


def _report_table(report: BenchReport) -> Table:
    first_row = report.rows[0]
    filters = list(first_row.cells)
    clip_text = "clip" if report.clip_mode else "no-clip"
    table = Table(
        title=f"PSNR (dB) on {report.image_id}, seed {report.seed}, {clip_text}",
        show_header=True,
        header_style="bold magenta",
    )
    table.add_column("Noise", style="cyan")
    for name in filters:
        table.add_column(name, justify="right")
    table.add_column("Best", style="bold green")
    for row in report.rows:
        best = row.best_filter
        cells = [
            f"[bold green]{row.cells[name].format()}[/bold green]" if name == best else row.cells[name].format()
            for name in filters
        ]
        table.add_row(row.noise.kind, *cells, best)
    return table


@app.command()
def bench(
    input_path: Optional[Path] = typer.Option(None, "--in", help="Clean image; the synthetic image when omitted"),
    csv_path: Optional[Path] = typer.Option(None, "--out", help="Report CSV path"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed (default 42)"),
    no_clip: bool = typer.Option(False, "--no-clip", help="Do not clip noisy images to [0, 255]"),
    markdown_path: Optional[Path] = typer.Option(None, "--markdown", help="Markdown report path"),
    dump_dir: Optional[Path] = typer.Option(None, "--dump-dir", help="Directory for per-cell PGMs and histograms"),
    config: Optional[Path] = typer.Option(None, "--config", help="YAML bench configuration"),
    noise_param: Optional[list[str]] = typer.Option(None, "--noise-param", help="Noise override kind.field=value"),
    filter_param: Optional[list[str]] = typer.Option(None, "--filter-param", help="Filter override kind.field=value"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads (default NOISEBENCH_THREADS)"),
    log_dir: Optional[Path] = typer.Option(None, "--log-dir", help="Directory for the error log"),
    debug: bool = typer.Option(False, "--debug", help="Enable debug logging"),
) -> None:
    """Run every noise model against every filter and report the PSNR matrix."""
    _configure_logging(debug)
    with _cli_errors("bench"):
        loaded = load_config(config) if config is not None else {}
        plan = BenchPlan.from_config(
            loaded,
            input_path=input_path,
            seed=seed,
            clip=False if no_clip else None,
            noise_overrides=merge_overrides(loaded.get("noise"), parse_param_overrides(noise_param)),
            filter_overrides=merge_overrides(loaded.get("filters"), parse_param_overrides(filter_param)),
            csv_path=csv_path,
            markdown_path=markdown_path,
            dump_dir=dump_dir,
            log_dir=log_dir,
            threads=threads,
        )
        report = run_benchmark(plan)
    console.print(_report_table(report))


@app.command()
def analyze(
    analysis_name: str = typer.Argument(..., help="Name of the analysis to run"),
    args: list[str] = typer.Argument(None, help="Additional arguments"),
    debug: bool = typer.Option(False, "--debug", help="Enable debug logging"),
) -> None:
    """Run a specific analysis by name."""
    _configure_logging(debug)

    logger.info(f"Running analysis '{analysis_name}' with arguments: {args}")

    try:
        run_analysis(analysis_name, args, debug=debug)
    except (NoiseBenchError, OSError) as e:
        logger.error(f"Analysis '{analysis_name}' failed: {e}")
        raise typer.Exit(exit_code_for(e))
    except Exception as e:
        logger.exception(f"Analysis '{analysis_name}' failed: {e}")
        raise typer.Exit(1)


def main() -> None:
    """Main entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
