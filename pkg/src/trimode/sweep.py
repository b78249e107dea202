"""Parameter sweeps over 2-D grids with region classification.

Each grid cell runs the full pipeline (mean fields -> drift/diffusion ->
stability -> Lyapunov -> entanglement) independently; cells are pure
functions of the grid spec, so results are deterministic and identical for
any worker count. Unstable cells carry null entanglement entries; per-cell
errors are captured in the cell record without aborting the sweep.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import dynamics, entanglement, model
from .errors import ConfigError, TrimodeError
from .model import SystemParams

Y_AXES = ("p_in", "chi")

#: measures whose positivity defines a region flag, in CSV column order.
MEASURES = ("e_sm", "e_fm", "e_fs", "e_f_sm", "e_s_fm", "e_m_fs", "e_tri")


@dataclass(frozen=True)
class SweepGrid:
    """Immutable 2-D grid spec: Delta on x, drive power or SHG rate on y.

    y_axis "p_in": y values are input powers in W (log-spaced by the
    builder). y_axis "chi": y values are linear multiples of the base chi.
    """

    base_params: SystemParams
    delta_values: tuple[float, ...]  # rad/s
    y_axis: str
    y_values: tuple[float, ...]
    mode: str = "paper"
    root_method: str = "linear"

    def __post_init__(self) -> None:
        if self.y_axis not in Y_AXES:
            raise ConfigError(f"y_axis must be one of {Y_AXES}, got {self.y_axis!r}")
        if len(self.delta_values) < 2 or len(self.y_values) < 2:
            raise ConfigError("grid needs at least 2 points per axis")
        if self.y_axis == "p_in" and min(self.y_values) <= 0.0:
            raise ConfigError("log-spaced power axis must be strictly positive")

    @property
    def n_x(self) -> int:
        return len(self.delta_values)

    @property
    def n_y(self) -> int:
        return len(self.y_values)


def build_grid(
    base_params: SystemParams,
    delta_range: tuple[float, float],
    n_delta: int,
    y_axis: str,
    y_range: tuple[float, float],
    n_y: int,
    mode: str = "paper",
    root_method: str = "linear",
) -> SweepGrid:
    """Linear Delta axis; log-spaced power axis or linear chi-multiple axis."""
    deltas = tuple(float(d) for d in np.linspace(delta_range[0], delta_range[1], n_delta))
    if y_axis == "p_in":
        if y_range[0] <= 0.0 or y_range[1] <= 0.0:
            raise ConfigError("power range must be strictly positive")
        ys = np.logspace(np.log10(y_range[0]), np.log10(y_range[1]), n_y)
    else:
        ys = np.linspace(y_range[0], y_range[1], n_y)
    return SweepGrid(
        base_params=base_params,
        delta_values=deltas,
        y_axis=y_axis,
        y_values=tuple(float(y) for y in ys),
        mode=mode,
        root_method=root_method,
    )


@dataclass(frozen=True)
class SweepCell:
    """Result record for one grid point; entanglement entries are None when
    the point is unstable or errored (never zeros)."""

    delta: float
    y_value: float
    stable: bool
    e_sm: Optional[float] = None
    e_fm: Optional[float] = None
    e_fs: Optional[float] = None
    e_f_sm: Optional[float] = None
    e_s_fm: Optional[float] = None
    e_m_fs: Optional[float] = None
    e_tri: Optional[float] = None
    u: Optional[float] = None
    n_roots: Optional[int] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class SweepResult:
    grid: SweepGrid
    cells: tuple[SweepCell, ...]  # row-major: y outer, delta inner
    metadata: dict = field(default_factory=dict)

    def cell(self, iy: int, ix: int) -> SweepCell:
        return self.cells[iy * self.grid.n_x + ix]


def cell_params(grid: SweepGrid, delta: float, y_value: float) -> SystemParams:
    if grid.y_axis == "p_in":
        return grid.base_params.replace(Delta=delta, P_in=y_value)
    return grid.base_params.replace(Delta=delta, chi=y_value * grid.base_params.chi)


def evaluate_cell(grid: SweepGrid, delta: float, y_value: float) -> SweepCell:
    """Run the full pipeline at one grid point, capturing physics errors."""
    try:
        params = cell_params(grid, delta, y_value)
        fields = model.steady_state_mean_fields(
            params, mode=grid.mode, root_method=grid.root_method
        )
        A = model.drift_matrix(params, fields)
        D = model.diffusion_matrix(params)
        report = dynamics.stability(A)
        if not report.stable:
            return SweepCell(
                delta=delta, y_value=y_value, stable=False,
                u=fields.u, n_roots=fields.n_roots,
            )
        V = dynamics.steady_state_covariance(A, D, check_stability=False)
        ent = entanglement.analyze(V)
        return SweepCell(
            delta=delta, y_value=y_value, stable=True,
            e_sm=ent.e_sm, e_fm=ent.e_fm, e_fs=ent.e_fs,
            e_f_sm=ent.e_f_sm, e_s_fm=ent.e_s_fm, e_m_fs=ent.e_m_fs,
            e_tri=ent.e_tri, u=fields.u, n_roots=fields.n_roots,
        )
    except TrimodeError as exc:
        return SweepCell(
            delta=delta, y_value=y_value, stable=False,
            error=type(exc).__name__,
        )


def _evaluate_indexed(args) -> tuple[int, SweepCell]:
    grid, index, delta, y_value = args
    return index, evaluate_cell(grid, delta, y_value)


def run_sweep(grid: SweepGrid, workers: int = 1) -> SweepResult:
    """Evaluate every grid cell; results assembled in grid order regardless
    of worker scheduling."""
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    tasks = [
        (grid, iy * grid.n_x + ix, delta, y)
        for iy, y in enumerate(grid.y_values)
        for ix, delta in enumerate(grid.delta_values)
    ]
    cells: list[Optional[SweepCell]] = [None] * len(tasks)
    if workers == 1:
        for _, index, delta, y in tasks:
            cells[index] = evaluate_cell(grid, delta, y)
    else:
        chunk = max(1, len(tasks) // (8 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for index, cell in pool.map(_evaluate_indexed, tasks, chunksize=chunk):
                cells[index] = cell
    metadata = {
        "n_x": grid.n_x,
        "n_y": grid.n_y,
        "y_axis": grid.y_axis,
        "mode": grid.mode,
        "root_method": grid.root_method,
    }
    return SweepResult(grid=grid, cells=tuple(cells), metadata=metadata)


def classify_regions(result: SweepResult) -> dict[str, np.ndarray]:
    """Per-cell boolean flags: one (n_y, n_x) array per measure plus 'stable'.

    A measure flag is true where the cell is stable and the measure is
    strictly positive; unstable/errored cells are false everywhere.
    """
    grid = result.grid
    flags = {name: np.zeros((grid.n_y, grid.n_x), dtype=bool) for name in MEASURES}
    flags["stable"] = np.zeros((grid.n_y, grid.n_x), dtype=bool)
    for iy in range(grid.n_y):
        for ix in range(grid.n_x):
            cell = result.cell(iy, ix)
            flags["stable"][iy, ix] = bool(cell.stable)
            if cell.stable:
                for name in MEASURES:
                    value = getattr(cell, name)
                    flags[name][iy, ix] = value is not None and value > 0.0
    return flags


# marching-squares segment table: case index from corner bits
# a=(iy,ix)->1, b=(iy,ix+1)->2, c=(iy+1,ix+1)->4, d=(iy+1,ix)->8;
# edges: 0=ab, 1=bc, 2=cd, 3=da.
_MS_TABLE: dict[int, tuple[tuple[int, int], ...]] = {
    0: (), 15: (),
    1: ((3, 0),), 2: ((0, 1),), 3: ((3, 1),), 4: ((1, 2),),
    5: ((3, 0), (1, 2)), 6: ((0, 2),), 7: ((3, 2),), 8: ((2, 3),),
    9: ((0, 2),), 10: ((0, 1), (2, 3)), 11: ((1, 2),), 12: ((1, 3),),
    13: ((0, 1),), 14: ((0, 3),),
}


def marching_squares(
    flag: np.ndarray, xs, ys
) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Boundary segments of a boolean field sampled at grid points.

    Returns line segments (midpoint-interpolated, level 0.5) separating true
    from false regions; a single isolated true point yields a 4-segment
    diamond around it.
    """
    flag = np.asarray(flag, dtype=bool)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    segments = []
    for iy in range(flag.shape[0] - 1):
        for ix in range(flag.shape[1] - 1):
            a = flag[iy, ix]
            b = flag[iy, ix + 1]
            c = flag[iy + 1, ix + 1]
            d = flag[iy + 1, ix]
            case = int(a) | (int(b) << 1) | (int(c) << 2) | (int(d) << 3)
            if case in (0, 15):
                continue
            x0, x1 = xs[ix], xs[ix + 1]
            y0, y1 = ys[iy], ys[iy + 1]
            xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
            edge_points = {
                0: (xm, y0),   # ab
                1: (x1, ym),   # bc
                2: (xm, y1),   # cd
                3: (x0, ym),   # da
            }
            for e1, e2 in _MS_TABLE[case]:
                segments.append((edge_points[e1], edge_points[e2]))
    return segments


def region_boundaries(
    result: SweepResult,
) -> dict[str, list[tuple[tuple[float, float], tuple[float, float]]]]:
    """Marching-squares boundary polyline segments for every region flag."""
    flags = classify_regions(result)
    xs = result.grid.delta_values
    ys = result.grid.y_values
    return {name: marching_squares(f, xs, ys) for name, f in flags.items()}
