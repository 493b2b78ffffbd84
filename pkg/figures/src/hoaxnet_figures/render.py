"""Figure rendering from hoaxnet CSV output.

Three figure kinds, one per experiment preset:

  timeseries-by-density            believer share over time, one line per p
  believers-vs-density-by-alpha    final share vs p, one line per alpha
  majority-believers-vs-h00-panels majority share vs h00, one line per h11,
                                   one panel per minority fraction f0

The CSV is the only input: parsing produces plain series structures whose
values equal the file's values (axes display percentages via tick
formatting, not by rescaling the data).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.ticker import PercentFormatter

KINDS = (
    "timeseries-by-density",
    "believers-vs-density-by-alpha",
    "majority-believers-vs-h00-panels",
)


class FigureDataError(Exception):
    """Input CSV cannot feed the requested figure kind."""


@dataclass
class FigureJob:
    kind: str
    input_csv: Path
    output_image: Path

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureDataError(
                f"unknown figure kind {self.kind!r}; expected one of {', '.join(KINDS)}"
            )
        self.input_csv = Path(self.input_csv)
        self.output_image = Path(self.output_image)


@dataclass
class Series:
    """One plotted line: label plus x/y arrays and optional +-1 std errors."""

    label: str
    x: list[float]
    y: list[float]
    yerr: list[float] | None = None


@dataclass
class Panel:
    title: str
    series: list[Series] = field(default_factory=list)


@dataclass
class FigureData:
    """Everything the drawing layer needs; values are verbatim CSV values."""

    kind: str
    x_label: str
    y_label: str
    panels: list[Panel]


def _read_rows(path: Path, required: tuple[str, ...]) -> list[dict]:
    try:
        with open(path, newline="") as handle:
            reader = csv.DictReader(handle)
            header = reader.fieldnames or []
            rows = list(reader)
    except OSError as exc:
        raise FigureDataError(f"cannot read {path}: {exc}") from exc
    missing = [column for column in required if column not in header]
    if missing:
        raise FigureDataError(
            f"{path} is missing required column(s): {', '.join(missing)}"
        )
    if not rows:
        raise FigureDataError(f"{path} contains a header but no data rows")
    empty = [
        column
        for column in required
        if all(not row.get(column, "").strip() for row in rows)
    ]
    if empty:
        raise FigureDataError(f"{path} has no values in column(s): {', '.join(empty)}")
    return rows


def _grouped_series(rows, group_column, x_column, y_column, err_column=None):
    series = []
    for key in sorted({float(r[group_column]) for r in rows}):
        picked = [r for r in rows if float(r[group_column]) == key]
        picked.sort(key=lambda r: float(r[x_column]))
        series.append(
            Series(
                label=f"{group_column}={key:g}",
                x=[float(r[x_column]) for r in picked],
                y=[float(r[y_column]) for r in picked],
                yerr=[float(r[err_column]) for r in picked] if err_column else None,
            )
        )
    return series


def load_figure_data(job: FigureJob) -> FigureData:
    """Parse the job's CSV into plot-ready series for its figure kind."""
    if job.kind == "timeseries-by-density":
        rows = _read_rows(job.input_csv, ("t", "mean_believers"))
        if any(row.get("p", "").strip() for row in rows):
            series = _grouped_series(rows, "p", "t", "mean_believers")
        else:
            series = [
                Series(
                    label="mean_believers",
                    x=[float(r["t"]) for r in rows],
                    y=[float(r["mean_believers"]) for r in rows],
                )
            ]
        return FigureData(
            kind=job.kind, x_label="t", y_label="% believers",
            panels=[Panel(title="", series=series)],
        )

    if job.kind == "believers-vs-density-by-alpha":
        rows = _read_rows(
            job.input_csv,
            ("p", "alpha", "mean_believers_global", "std_believers_global"),
        )
        series = _grouped_series(
            rows, "alpha", "p", "mean_believers_global", "std_believers_global"
        )
        return FigureData(
            kind=job.kind, x_label="p", y_label="% believers",
            panels=[Panel(title="", series=series)],
        )

    rows = _read_rows(
        job.input_csv,
        ("f0", "h00", "h11", "mean_believers_majority", "std_believers_majority"),
    )
    panels = []
    for f0 in sorted({float(r["f0"]) for r in rows}):
        picked = [r for r in rows if float(r["f0"]) == f0]
        panels.append(
            Panel(
                title=f"f0={f0:g}",
                series=_grouped_series(
                    picked, "h11", "h00",
                    "mean_believers_majority", "std_believers_majority",
                ),
            )
        )
    return FigureData(
        kind=job.kind, x_label="h00", y_label="% believers (majority)", panels=panels,
    )


def draw(data: FigureData) -> plt.Figure:
    """Draw the parsed series; one axes per panel, shared y scale."""
    count = len(data.panels)
    fig, axes = plt.subplots(
        1, count, figsize=(5.0 * count, 4.0), sharey=True, squeeze=False
    )
    for ax, panel in zip(axes[0], data.panels):
        for series in panel.series:
            if series.yerr is not None:
                ax.errorbar(
                    series.x, series.y, yerr=series.yerr,
                    marker="o", capsize=3, label=series.label,
                )
            else:
                ax.plot(series.x, series.y, label=series.label)
        ax.set_xlabel(data.x_label)
        ax.set_title(panel.title)
        ax.yaxis.set_major_formatter(PercentFormatter(xmax=1.0))
        ax.grid(True, alpha=0.3)
        if len(panel.series) > 1 or panel.series[0].label != "mean_believers":
            ax.legend()
    axes[0][0].set_ylabel(data.y_label)
    fig.tight_layout()
    return fig


def render(job: FigureJob) -> FigureData:
    """Load, draw, and save one figure; no file is written on failure.

    Returns the parsed FigureData so callers can inspect exactly what was
    plotted. The output format follows the file extension (vector formats
    like .pdf/.svg by default, raster via .png).
    """
    data = load_figure_data(job)
    fig = draw(data)
    try:
        fig.savefig(job.output_image)
    finally:
        plt.close(fig)
    return data
