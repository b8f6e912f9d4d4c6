"""
Image files and benchmark report serialization.

Binary PGM (P5, 8-bit) is the canonical image format and round-trips bit-exactly;
PNG goes through Pillow with the same quantization. Reports are written as CSV
(one normative cell formatter) and optionally rendered to markdown from
``report_template.md`` reusing the CSV cell text.
"""

from __future__ import annotations
import io
import csv
import os
from typing import Mapping
from pathlib import Path
from dataclasses import field, dataclass

import numpy as np
from jinja2 import Template
from loguru import logger
from PIL import Image

from noisebench.utils.errors import SizeError, PgmParseError, ParameterError
from noisebench.utils.metrics import PsnrValue
from noisebench.pipeline.noise import NOISE_KINDS, NoiseSpec
from noisebench.pipeline.filters import FILTER_KINDS
from noisebench.utils.image_core import MAX_PIXELS, Histogram, ImageGrid, quantize


REPORT_TEMPLATE_PATH = Path(__file__).with_name("report_template.md")

_PGM_WHITESPACE = b" \t\n\r\v\f"


class _PgmHeaderReader:
    """Token reader for the PGM header: whitespace separated, '#' comments run to end of line."""

    def __init__(self, payload: bytes):
        self.payload = payload
        self.pos = 0

    def _skip_blank(self) -> None:
        while self.pos < len(self.payload):
            byte = self.payload[self.pos : self.pos + 1]
            if byte in _PGM_WHITESPACE:
                self.pos += 1
            elif byte == b"#":
                end = self.payload.find(b"\n", self.pos)
                self.pos = len(self.payload) if end < 0 else end + 1
            else:
                return

    def token(self, field_name: str) -> bytes:
        self._skip_blank()
        start = self.pos
        while self.pos < len(self.payload) and self.payload[self.pos : self.pos + 1] not in _PGM_WHITESPACE:
            if self.payload[self.pos : self.pos + 1] == b"#":
                break
            self.pos += 1
        if start == self.pos:
            raise PgmParseError(field_name, "missing header field")
        return self.payload[start : self.pos]

    def number(self, field_name: str) -> int:
        raw = self.token(field_name)
        if not raw.isdigit():
            raise PgmParseError(field_name, f"non-numeric header value {raw[:16]!r}")
        return int(raw)

    def end_of_header(self) -> int:
        """Offset of the raster: exactly one whitespace byte follows maxval."""
        if self.pos >= len(self.payload) or self.payload[self.pos : self.pos + 1] not in _PGM_WHITESPACE:
            raise PgmParseError("maxval", "header must end with a single whitespace byte")
        return self.pos + 1


def read_pgm(payload: bytes) -> ImageGrid:
    reader = _PgmHeaderReader(payload)
    magic = reader.token("magic")
    if magic != b"P5":
        raise PgmParseError("magic", f"unsupported magic {magic[:8].decode('ascii', 'replace')!r}, expected 'P5'")
    width = reader.number("width")
    height = reader.number("height")
    maxval = reader.number("maxval")
    if width < 1:
        raise PgmParseError("width", f"must be positive, got {width}")
    if height < 1:
        raise PgmParseError("height", f"must be positive, got {height}")
    if not 1 <= maxval <= 255:
        raise PgmParseError("maxval", f"only 8-bit images are supported (1..255), got {maxval}")
    if width * height > MAX_PIXELS:
        raise SizeError(f"PGM of {width}x{height} exceeds the {MAX_PIXELS} pixel limit")

    start = reader.end_of_header()
    count = width * height
    raster = payload[start : start + count]
    if len(raster) < count:
        raise PgmParseError("payload", f"truncated pixel payload: expected {count} bytes, found {len(raster)}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return ImageGrid(pixels.astype(np.float64))


def write_pgm(img: ImageGrid) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + quantize(img).tobytes()


def read_image(path: str | os.PathLike) -> ImageGrid:
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        return read_pgm(path.read_bytes())
    if suffix == ".png":
        with Image.open(path) as picture:
            return ImageGrid(np.asarray(picture.convert("L"), dtype=np.float64))
    raise ParameterError(f"unsupported image format '{path.suffix}' (use .pgm or .png)")


def write_image(path: str | os.PathLike, img: ImageGrid) -> None:
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        path.write_bytes(write_pgm(img))
    elif suffix == ".png":
        Image.fromarray(quantize(img)).save(path, format="PNG")
    else:
        raise ParameterError(f"unsupported image format '{path.suffix}' (use .pgm or .png)")
    logger.debug(f"Wrote {img.width}x{img.height} image to {path}")


def best_filter(cells: Mapping[str, PsnrValue]) -> str:
    """Filter with the highest PSNR; ties go to the earliest filter in ``FILTER_KINDS``."""
    best_kind = FILTER_KINDS[0]
    for kind in FILTER_KINDS[1:]:
        if cells[kind].db > cells[best_kind].db:
            best_kind = kind
    return best_kind


@dataclass(slots=True, frozen=True)
class BenchRow:
    noise: NoiseSpec
    cells: Mapping[str, PsnrValue]

    def __post_init__(self) -> None:
        if set(self.cells) != set(FILTER_KINDS):
            raise ParameterError(f"row '{self.noise.kind}' must hold one cell per filter, got {sorted(self.cells)}")

    @property
    def best_filter(self) -> str:
        return best_filter(self.cells)


@dataclass(slots=True, frozen=True)
class BenchReport:
    image_id: str
    seed: int
    clip_mode: bool
    rows: tuple[BenchRow, ...]
    tool_version: str = "dev"
    timings: Mapping[str, float] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        kinds = [row.noise.kind for row in self.rows]
        if sorted(kinds) != sorted(NOISE_KINDS):
            raise ParameterError(f"report must hold exactly one row per noise kind, got {kinds}")
        ordered = tuple(sorted(self.rows, key=lambda row: NOISE_KINDS.index(row.noise.kind)))
        object.__setattr__(self, "rows", ordered)

    def row(self, noise_kind: str) -> BenchRow:
        return self.rows[NOISE_KINDS.index(noise_kind)]


REPORT_HEADER: tuple[str, ...] = ("noise", *FILTER_KINDS, "best")


def report_cells(report: BenchReport) -> list[list[str]]:
    """Text of every report line after the header, shared by the CSV and markdown writers."""
    return [
        [row.noise.kind, *(row.cells[kind].format() for kind in FILTER_KINDS), row.best_filter]
        for row in report.rows
    ]


def write_report_csv(report: BenchReport) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    writer.writerows(report_cells(report))
    return buffer.getvalue().encode("utf-8")


def write_histogram_csv(hist: Histogram) -> bytes:
    lines = [f"{index},{int(count)}\n" for index, count in enumerate(hist.bins)]
    return "".join(lines).encode("ascii")


def render_markdown_report(report: BenchReport, template_path: Path | None = None) -> str:
    template_path = template_path or REPORT_TEMPLATE_PATH
    template = Template(template_path.read_text(encoding="utf-8"), keep_trailing_newline=True)
    rows = [
        {"noise": cells[0], "cells": cells[1:-1], "best": cells[-1], "params": row.noise.describe()}
        for row, cells in zip(report.rows, report_cells(report))
    ]
    return template.render(
        image_id=report.image_id,
        seed=report.seed,
        clip_mode=report.clip_mode,
        tool_version=report.tool_version,
        filters=FILTER_KINDS,
        rows=rows,
    )
