"""
This module orchestrates the noise x filter benchmark.

For each of the eight noise kinds it synthesizes one noisy realization of the
clean image (seeded by ``derive_substream(master_seed, kind)``), runs all eight
filters on that same noisy image, and scores every output with PSNR against the
clean image. The Laplacian response is clipped to [0, 255] before scoring; the
other filters are scored on their raw output.

Rows are independent, so they run on a thread pool capped by the plan or by
NOISEBENCH_THREADS; the report does not depend on the number of workers.

Key Responsibilities:
1. Resolve the plan: input image, seed, clip mode, parameter overrides, outputs.
2. Run each noise row, timing it and naming the failing cell on error.
3. Optionally dump noisy/filtered PGMs and per-cell histograms.
4. Assemble the BenchReport and write the CSV / markdown outputs.
"""

from __future__ import annotations
import os
import time
from typing import Any, Mapping
from pathlib import Path
from dataclasses import field, dataclass
from importlib.metadata import PackageNotFoundError, version
from concurrent.futures import ThreadPoolExecutor, as_completed

from loguru import logger
from tqdm.auto import tqdm

from noisebench.utils.rng import check_seed, derive_substream
from noisebench.utils.errors import ParameterError, BenchCellError
from noisebench.utils.params import require
from noisebench.utils.metrics import psnr
from noisebench.pipeline.noise import NOISE_KINDS, NoiseSpec, apply_noise
from noisebench.utils.io_engine import (
    BenchRow,
    BenchReport,
    write_pgm,
    read_image,
    write_report_csv,
    write_histogram_csv,
    render_markdown_report,
)
from noisebench.pipeline.filters import FILTER_KINDS, FilterSpec, apply_filter
from noisebench.utils.synthetic import SYNTHETIC_IMAGE_ID, synthetic_test_image
from noisebench.utils.image_core import ImageGrid, histogram, clip_to_byte_range
from noisebench.utils.loading_engine import resolve_thread_count


ROW_TIMINGS: list[dict[str, float]] = []

ERROR_LOG_NAME = "bench_errors.log"


def _check_override_kinds(overrides: Mapping[str, Any], known: tuple[str, ...], what: str) -> None:
    unknown = sorted(set(overrides) - set(known))
    if unknown:
        raise ParameterError(f"unknown {what} kind(s) {', '.join(unknown)}; expected one of {', '.join(known)}")


@dataclass(slots=True, frozen=True)
class BenchPlan:
    input_path: Path | None = None
    seed: int = 42
    clip: bool = True
    noise_overrides: Mapping[str, Mapping[str, Any]] = field(default_factory=dict)
    filter_overrides: Mapping[str, Mapping[str, Any]] = field(default_factory=dict)
    csv_path: Path | None = None
    markdown_path: Path | None = None
    dump_dir: Path | None = None
    log_dir: Path | None = None
    threads: int | None = None
    progress: bool = True

    def __post_init__(self) -> None:
        check_seed(self.seed)
        require(isinstance(self.clip, bool), f"clip must be true or false, got {self.clip!r}")
        _check_override_kinds(self.noise_overrides, NOISE_KINDS, "noise")
        _check_override_kinds(self.filter_overrides, FILTER_KINDS, "filter")
        # building the specs validates every override before any pixel work
        self.noise_specs()
        self.filter_specs()

    def noise_specs(self) -> list[NoiseSpec]:
        return [NoiseSpec.from_overrides(kind, self.noise_overrides.get(kind), clip=self.clip) for kind in NOISE_KINDS]

    def filter_specs(self) -> list[FilterSpec]:
        return [FilterSpec.from_overrides(kind, self.filter_overrides.get(kind)) for kind in FILTER_KINDS]

    @classmethod
    def from_config(cls, config: Mapping[str, Any] | None = None, **explicit: Any) -> BenchPlan:
        """Plan from a loaded YAML config; keyword arguments that are not None take precedence."""
        config = dict(config or {})
        outputs = config.get("outputs") or {}

        def path_or_none(value: Any) -> Path | None:
            return Path(value) if value not in (None, "") else None

        values: dict[str, Any] = {
            "input_path": path_or_none(config.get("input")),
            "seed": config.get("seed", 42),
            "clip": config.get("clip", True),
            "noise_overrides": config.get("noise") or {},
            "filter_overrides": config.get("filters") or {},
            "csv_path": path_or_none(outputs.get("csv")),
            "markdown_path": path_or_none(outputs.get("markdown")),
            "dump_dir": path_or_none(outputs.get("dump_dir")),
            "log_dir": path_or_none(outputs.get("log_dir")),
            "threads": config.get("threads"),
        }
        values.update({key: value for key, value in explicit.items() if value is not None})
        return cls(**values)


def load_clean_image(input_path: Path | None) -> tuple[ImageGrid, str]:
    if input_path is None:
        logger.info("No input image given, using the synthetic 256x256 test image")
        return synthetic_test_image(), SYNTHETIC_IMAGE_ID
    return read_image(input_path), Path(input_path).name


def tool_version() -> str:
    try:
        return version("noisebench")
    except PackageNotFoundError:
        return "dev"


def _dump_cell(dump_dir: Path, noise_kind: str, filter_kind: str, output: ImageGrid) -> None:
    stem = f"{noise_kind}__{filter_kind}"
    (dump_dir / f"{stem}.pgm").write_bytes(write_pgm(output))
    (dump_dir / f"{stem}.hist.csv").write_bytes(write_histogram_csv(histogram(output)))


def _run_row(
    clean: ImageGrid,
    noise_spec: NoiseSpec,
    filter_specs: list[FilterSpec],
    master_seed: int,
    dump_dir: Path | None,
) -> tuple[BenchRow, dict[str, float]]:
    kind = noise_spec.kind
    logger.info(f"Starting noise row '{kind}' ({noise_spec.describe()})")
    row_start_time = time.time()

    try:
        noisy = apply_noise(clean, noise_spec, derive_substream(master_seed, kind))
        if dump_dir is not None:
            (dump_dir / f"{kind}__noisy.pgm").write_bytes(write_pgm(noisy))
    except Exception as exc:
        raise BenchCellError(kind, None, exc) from exc

    cells = {}
    for filter_spec in filter_specs:
        try:
            output = apply_filter(noisy, filter_spec)
            if filter_spec.kind == "laplacian":
                output = clip_to_byte_range(output)
            cells[filter_spec.kind] = psnr(clean, output)
            if dump_dir is not None:
                _dump_cell(dump_dir, kind, filter_spec.kind, output)
        except Exception as exc:
            raise BenchCellError(kind, filter_spec.kind, exc) from exc
        logger.debug(f"  {kind} / {filter_spec.kind}: {cells[filter_spec.kind].format()} dB")

    row_end_time = time.time()
    elapsed = row_end_time - row_start_time
    logger.success(f"Completed noise row '{kind}' in {elapsed:.3f}s")
    timing = {"noise": kind, "start": row_start_time, "end": row_end_time, "elapsed": elapsed}
    return BenchRow(noise=noise_spec, cells=cells), timing


def run_benchmark(plan: BenchPlan) -> BenchReport:
    global ROW_TIMINGS
    ROW_TIMINGS = []

    clean, image_id = load_clean_image(plan.input_path)
    noise_specs = plan.noise_specs()
    filter_specs = plan.filter_specs()
    threads = resolve_thread_count(plan.threads)
    logger.debug(f"Benchmark on '{image_id}' ({clean.width}x{clean.height}), seed={plan.seed}, clip={plan.clip}")
    logger.debug(f"Running {len(noise_specs)} noise rows on {threads} thread(s)")

    if plan.dump_dir is not None:
        os.makedirs(plan.dump_dir, exist_ok=True)

    log_id = None
    if plan.log_dir is not None:
        os.makedirs(plan.log_dir, exist_ok=True)
        error_log_path = os.path.join(plan.log_dir, ERROR_LOG_NAME)
        log_id = logger.add(error_log_path, level="ERROR", backtrace=True, diagnose=True, mode="a")

    bench_start_time = time.time()
    rows: list[BenchRow] = []
    try:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_run_row, clean, spec, filter_specs, plan.seed, plan.dump_dir) for spec in noise_specs
            ]
            for future in tqdm(as_completed(futures), total=len(futures), desc="noise rows", disable=not plan.progress):
                row, timing = future.result()
                rows.append(row)
                ROW_TIMINGS.append(timing)
    except BenchCellError as exc:
        logger.exception(f"Benchmark failed: {exc}")
        raise
    finally:
        if log_id is not None:
            _remove_log_handler_safely(log_id)

    report = BenchReport(
        image_id=image_id,
        seed=plan.seed,
        clip_mode=plan.clip,
        rows=tuple(rows),
        tool_version=tool_version(),
        timings={timing["noise"]: timing["elapsed"] for timing in ROW_TIMINGS},
    )
    logger.success(f"Benchmark finished in {time.time() - bench_start_time:.3f}s")

    if plan.csv_path is not None:
        Path(plan.csv_path).write_bytes(write_report_csv(report))
        logger.info(f"Wrote report CSV to {plan.csv_path}")
    if plan.markdown_path is not None:
        Path(plan.markdown_path).write_text(render_markdown_report(report), encoding="utf-8", newline="\n")
        logger.info(f"Wrote markdown report to {plan.markdown_path}")
    return report


def _remove_log_handler_safely(log_id: int) -> None:
    try:
        logger.remove(log_id)
    except ValueError:
        pass
