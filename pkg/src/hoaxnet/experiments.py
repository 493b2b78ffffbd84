"""Parameter-grid sweeps, built-in presets, and CSV emission.

A sweep runs one seeded ensemble per grid point and emits one result row
per point, in lexicographic grid order. Per-point seeds derive from
(master_seed, grid index), so adding grid points never perturbs existing
points' results.
"""

from __future__ import annotations

import itertools
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import ModelParams
from .engine import InitialCondition, child_seed, ensemble, ensemble_series
from .graph import BlockMatrix, ERGraphSpec, SBMGraphSpec

CSV_HEADER = (
    "family,f0,h00,h01,h11,p,alpha,beta,p_verify,p_forget,steps,iterations,seed,"
    "mean_believers_global,std_believers_global,"
    "mean_believers_minority,std_believers_minority,"
    "mean_believers_majority,std_believers_majority"
)
TIMESERIES_HEADER = "t,mean_believers"

# Default sweep axes: densities span mean degrees 2..16 at n = 1000 and the
# minority/majority density grids bracket the usual two-block settings.
DENSITY_GRID = (0.002, 0.004, 0.008, 0.016)
ALPHA_GRID = (0.1, 0.3, 0.5, 0.7)
H00_GRID = (0.01, 0.02, 0.04, 0.07, 0.10)
H11_GRID = (0.004, 0.007, 0.010)
F0_GRID = (0.1, 0.2, 0.3)


@dataclass
class SweepSpec:
    """A full parameter grid plus the fixed model and run settings.

    Swept axes are value lists; the grid is their cross product iterated in
    CSV column order (f0, h00, h01, h11, p, then alpha innermost).
    """

    family: str                       # "er" | "sbm"
    n: int
    alpha_values: tuple[float, ...]
    beta: float
    p_verify: float
    p_forget: float
    steps: int
    iterations: int
    master_seed: int
    p_values: tuple[float, ...] = ()      # ER only
    f0_values: tuple[float, ...] = ()     # SBM only
    h00_values: tuple[float, ...] = ()
    h01_values: tuple[float, ...] = ()
    h11_values: tuple[float, ...] = ()
    window: int = 1
    believer_fraction: float = 0.01
    factchecker_fraction: float = 0.0
    seeding_scope: str = "whole-network"
    annealed: bool = True

    def __post_init__(self):
        if self.family not in ("er", "sbm"):
            raise ValueError(f"family must be 'er' or 'sbm'; got {self.family!r}")
        axes = self._axis_names()
        for name in axes:
            if not getattr(self, name):
                raise ValueError(f"swept list {name} must be nonempty for family={self.family}")
        if self.family == "er" and any((self.f0_values, self.h00_values, self.h01_values,
                                        self.h11_values)):
            raise ValueError("f0/h00/h01/h11 are not applicable to family=er")
        if self.family == "sbm" and self.p_values:
            raise ValueError("p is not applicable to family=sbm")
        # Fail early on invalid fixed values; grid values are validated when
        # each point's ModelParams / graph spec is built.
        ModelParams(self.beta, self.alpha_values[0], self.p_verify, self.p_forget)
        InitialCondition(self.believer_fraction, self.seeding_scope, self.factchecker_fraction)
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not 1 <= self.window <= self.steps + 1:
            raise ValueError(f"window must lie in [1, steps + 1]; got {self.window}")

    def _axis_names(self) -> tuple[str, ...]:
        if self.family == "er":
            return ("p_values", "alpha_values")
        return ("f0_values", "h00_values", "h01_values", "h11_values", "alpha_values")

    @property
    def grid_size(self) -> int:
        size = 1
        for name in self._axis_names():
            size *= len(getattr(self, name))
        return size

    def grid_points(self) -> list[dict]:
        """Swept-value dicts in lexicographic grid order."""
        axes = self._axis_names()
        names = [a.removesuffix("_values") for a in axes]
        values = [getattr(self, a) for a in axes]
        return [dict(zip(names, combo)) for combo in itertools.product(*values)]

    def netspec_for(self, point: dict):
        if self.family == "er":
            return ERGraphSpec(self.n, point["p"])
        return SBMGraphSpec(
            self.n, point["f0"], BlockMatrix(point["h00"], point["h01"], point["h11"])
        )

    def params_for(self, point: dict) -> ModelParams:
        return ModelParams(self.beta, point["alpha"], self.p_verify, self.p_forget)

    def initial_condition(self) -> InitialCondition:
        return InitialCondition(
            self.believer_fraction, self.seeding_scope, self.factchecker_fraction
        )


@dataclass
class ResultRow:
    """One aggregated record per grid point, mirroring the CSV schema."""

    family: str
    f0: float | None
    h00: float | None
    h01: float | None
    h11: float | None
    p: float | None
    alpha: float
    beta: float
    p_verify: float
    p_forget: float
    steps: int
    iterations: int
    seed: int
    mean_believers_global: float
    std_believers_global: float
    mean_believers_minority: float
    std_believers_minority: float
    mean_believers_majority: float
    std_believers_majority: float

    def to_csv_fields(self) -> list[str]:
        return [
            self.family,
            _fmt(self.f0), _fmt(self.h00), _fmt(self.h01), _fmt(self.h11), _fmt(self.p),
            _fmt(self.alpha), _fmt(self.beta), _fmt(self.p_verify), _fmt(self.p_forget),
            str(self.steps), str(self.iterations), str(self.seed),
            _fmt(self.mean_believers_global), _fmt(self.std_believers_global),
            _fmt(self.mean_believers_minority), _fmt(self.std_believers_minority),
            _fmt(self.mean_believers_majority), _fmt(self.std_believers_majority),
        ]


def _fmt(value) -> str:
    """Fractions at 6 significant digits; empty cell for missing values."""
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ""
    return f"{value:.6g}"


def run_sweep(spec: SweepSpec, workers: int = 1, progress=None) -> list[ResultRow]:
    """Run a seeded ensemble per grid point; rows come back in grid order.

    Rerunning an identical spec reproduces identical rows; `workers` only
    parallelizes ensemble iterations.
    """
    points = spec.grid_points()
    if not points:
        raise ValueError("empty sweep grid")
    rows = []
    with _pool(workers) as executor:
        for idx, point in enumerate(points):
            stats = ensemble(
                spec.netspec_for(point),
                spec.params_for(point),
                spec.initial_condition(),
                spec.steps,
                spec.iterations,
                child_seed(spec.master_seed, idx),
                window=spec.window,
                annealed=spec.annealed,
                executor=executor,
            )
            rows.append(
                ResultRow(
                    family=spec.family,
                    f0=point.get("f0"), h00=point.get("h00"),
                    h01=point.get("h01"), h11=point.get("h11"),
                    p=point.get("p"), alpha=point["alpha"],
                    beta=spec.beta, p_verify=spec.p_verify, p_forget=spec.p_forget,
                    steps=spec.steps, iterations=spec.iterations, seed=spec.master_seed,
                    mean_believers_global=stats.mean_global,
                    std_believers_global=stats.std_global,
                    mean_believers_minority=stats.mean_minority,
                    std_believers_minority=stats.std_minority,
                    mean_believers_majority=stats.mean_majority,
                    std_believers_majority=stats.std_majority,
                )
            )
            if progress is not None:
                progress(idx + 1, len(points))
    return rows


def run_timeseries(spec: SweepSpec, workers: int = 1) -> np.ndarray:
    """Mean believer share per step for a single-point spec (steps + 1 values)."""
    if spec.grid_size != 1:
        raise ValueError(f"timeseries needs a grid of size 1; got {spec.grid_size}")
    point = spec.grid_points()[0]
    with _pool(workers) as executor:
        return ensemble_series(
            spec.netspec_for(point),
            spec.params_for(point),
            spec.initial_condition(),
            spec.steps,
            spec.iterations,
            child_seed(spec.master_seed, 0),
            annealed=spec.annealed,
            executor=executor,
        )


def run_timeseries_by_density(
    spec: SweepSpec, workers: int = 1, progress=None
) -> list[tuple[float, np.ndarray]]:
    """One mean believer-share series per density p (single-alpha ER spec).

    Point seeds follow the same (master_seed, grid index) rule as run_sweep.
    """
    if spec.family != "er":
        raise ValueError("density time series requires family=er")
    if len(spec.alpha_values) != 1:
        raise ValueError("density time series requires a single alpha value")
    points = spec.grid_points()
    blocks = []
    with _pool(workers) as executor:
        for idx, point in enumerate(points):
            series = ensemble_series(
                spec.netspec_for(point),
                spec.params_for(point),
                spec.initial_condition(),
                spec.steps,
                spec.iterations,
                child_seed(spec.master_seed, idx),
                annealed=spec.annealed,
                executor=executor,
            )
            blocks.append((point["p"], series))
            if progress is not None:
                progress(idx + 1, len(points))
    return blocks


class _pool:
    """ProcessPoolExecutor when workers > 1, else a no-op context yielding None."""

    def __init__(self, workers: int):
        self.workers = workers
        self.executor = None

    def __enter__(self):
        if self.workers > 1:
            from concurrent.futures import ProcessPoolExecutor

            self.executor = ProcessPoolExecutor(max_workers=self.workers)
        return self.executor

    def __exit__(self, *exc):
        if self.executor is not None:
            self.executor.shutdown()
        return False


def _atomic_write(path, text: str) -> None:
    """Write via a temp file and rename, so failures leave no partial output."""
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".")
        try:
            with os.fdopen(fd, "w", newline="") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise OSError(f"failed to write {path}: {exc}") from exc


def write_csv(rows: list[ResultRow], path) -> None:
    """Emit the sweep schema: fixed column order, '.' decimals, 6 significant digits."""
    lines = [CSV_HEADER]
    lines.extend(",".join(row.to_csv_fields()) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")


def write_timeseries_csv(blocks, path) -> None:
    """Emit time-series CSV.

    `blocks` is a list of (p, series) pairs; a single pair with p=None emits
    the plain `t,mean_believers` schema, otherwise a leading p column marks
    each block's density.
    """
    single = len(blocks) == 1 and blocks[0][0] is None
    lines = [TIMESERIES_HEADER if single else "p," + TIMESERIES_HEADER]
    for p, series in blocks:
        for t, value in enumerate(series):
            prefix = "" if single else f"{_fmt(p)},"
            lines.append(f"{prefix}{t},{_fmt(value)}")
    _atomic_write(path, "\n".join(lines) + "\n")


@dataclass
class Preset:
    """A named, fully populated sweep with its natural output kind."""

    name: str
    kind: str  # "sweep" | "timeseries-by-density"
    spec: SweepSpec


PRESET_NAMES = ("fig2a", "fig2b", "fig3")


def preset(name: str) -> Preset:
    """Built-in experiment presets.

    fig2a: believer share over time, one series per density (alpha 0.3).
    fig2b: final believer share across a density x gullibility grid.
    fig3:  majority believer share across minority density, majority
           density, and minority size, with sparse cross-group links.
    """
    base = dict(
        n=1000, beta=0.5, p_verify=0.05, p_forget=0.1, steps=1000, master_seed=42
    )
    if name == "fig2a":
        spec = SweepSpec(
            family="er", alpha_values=(0.3,), p_values=DENSITY_GRID, iterations=50, **base
        )
        return Preset(name, "timeseries-by-density", spec)
    if name == "fig2b":
        spec = SweepSpec(
            family="er", alpha_values=ALPHA_GRID, p_values=DENSITY_GRID, iterations=50, **base
        )
        return Preset(name, "sweep", spec)
    if name == "fig3":
        spec = SweepSpec(
            family="sbm",
            alpha_values=(0.3,),
            f0_values=F0_GRID,
            h00_values=H00_GRID,
            h01_values=(0.002,),
            h11_values=H11_GRID,
            iterations=100,
            **base,
        )
        return Preset(name, "sweep", spec)
    raise ValueError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")
