import csv
from typing import List
from pathlib import Path
from dataclasses import dataclass

from loguru import logger
from rich.table import Table
from rich.console import Console


@dataclass
class ReportRow:
    noise: str
    cells: dict[str, str]
    best: str

    @classmethod
    def from_csv_row(cls, row: dict[str, str], filters: List[str]) -> "ReportRow":
        return cls(noise=row["noise"], cells={name: row[name] for name in filters}, best=row["best"])


def load_report(path: Path) -> tuple[List[str], List[ReportRow]]:
    """Filter column names and rows of a benchmark CSV."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        if len(header) < 3 or header[0] != "noise" or header[-1] != "best":
            raise ValueError(f"{path} does not look like a noisebench report (header: {header})")
        filters = list(header[1:-1])
        return filters, [ReportRow.from_csv_row(row, filters) for row in reader]


class ReportDisplay:
    def __init__(self, console: Console):
        self.console = console

    def create_table(self, filters: List[str], title: str) -> Table:
        table = Table(title=title, show_header=True, header_style="bold cyan")
        table.add_column("Noise", style="white")
        for name in filters:
            table.add_column(name, justify="right")
        table.add_column("Best", style="bold green")
        return table

    def display(self, filters: List[str], rows: List[ReportRow], title: str) -> None:
        if not rows:
            self.console.print("[bold red]The report has no rows.[/bold red]")
            return

        table = self.create_table(filters, title)
        for row in rows:
            rendered = [
                f"[bold green]{row.cells[name]}[/bold green]" if name == row.best else row.cells[name]
                for name in filters
            ]
            table.add_row(row.noise, *rendered, row.best)
        self.console.print(table)


def run(*cli_args: str) -> None:
    """
    Usage:
        noisebench analyze view_report path/to/report.csv

    Prints the PSNR matrix of a benchmark CSV as a table, with each row's best
    filter highlighted.
    """
    if not cli_args:
        logger.error("No arguments provided. Usage: noisebench analyze view_report REPORT_CSV")
        return

    path = Path(cli_args[0])
    try:
        filters, rows = load_report(path)
    except FileNotFoundError:
        logger.error(f"Report not found at '{path}'. Aborting.")
        return
    except (ValueError, KeyError, csv.Error) as e:
        logger.error(f"Failed to read report '{path}': {e}")
        return

    ReportDisplay(Console()).display(filters, rows, f"PSNR (dB): {path.name}")
