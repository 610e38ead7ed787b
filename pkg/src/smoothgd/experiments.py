"""Distance-field experiments on polar grids of starting points.

A sweep runs the same 2-d descent from every point of a polar grid and
records how far each run ends from the origin (the saddle).  Because the
iteration on a quadratic is linear, all grid cells advance together as
flat arrays, one schedule step at a time; termination checks mirror
:func:`smoothgd.optimizers.run` cell by cell, in the same order
(stationarity, step budget, escape).  Every arithmetic operation is
elementwise across cells, so results do not depend on how the grid is
chunked across threads.
"""

import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .optimizers import (RunConfig, RunStatus, run,
                         stationarity_iteration_bound)
from .smoothing import solve_smoothed_pair

__all__ = [
    "PolarGrid",
    "DistanceField",
    "FieldSummary",
    "TrialReport",
    "sweep",
    "two_scale_search",
    "rate_check",
    "emit_csv",
    "load_csv",
    "write_summary_json",
]

# Cell status codes used in DistanceField / CSV, one per RunStatus plus a
# sentinel for cells whose iteration produced non-finite values.
STATUS_STRINGS = (
    RunStatus.REACHED_STATIONARY.value,
    RunStatus.MAX_ITERS.value,
    RunStatus.ESCAPED.value,
    "failed",
)
_STATIONARY, _MAX_ITERS, _ESCAPED, _FAILED = range(4)
_ACTIVE = -1


@dataclass(frozen=True)
class PolarGrid:
    """A product grid of radii and angles (degrees).

    Radii run from r_min to r_max inclusive in steps of r_step; angles
    live on the half-open interval [theta_min_deg, theta_max_deg) in steps
    of theta_step_deg, so a full circle never duplicates its seam.  Cells
    are ordered radius-major: all angles at the first radius, then the
    next radius, and so on.
    """

    r_min: float
    r_max: float
    r_step: float
    theta_min_deg: float
    theta_max_deg: float
    theta_step_deg: float

    def __post_init__(self):
        if not (0.0 < self.r_min <= self.r_max) or not math.isfinite(self.r_max):
            raise ValueError(
                f"need 0 < r_min <= r_max, got [{self.r_min}, {self.r_max}]")
        if not (self.r_step > 0.0 and math.isfinite(self.r_step)):
            raise ValueError(f"r_step must be > 0, got {self.r_step}")
        if not (self.theta_step_deg > 0.0 and math.isfinite(self.theta_step_deg)):
            raise ValueError(
                f"theta_step_deg must be > 0, got {self.theta_step_deg}")
        span = self.theta_max_deg - self.theta_min_deg
        if not (0.0 < span <= 360.0):
            raise ValueError(
                f"need 0 < theta span <= 360 degrees, got {span}")

    def r_values(self):
        count = int(math.floor((self.r_max - self.r_min) / self.r_step + 1e-9)) + 1
        return self.r_min + self.r_step * np.arange(count)

    def theta_values(self):
        span = self.theta_max_deg - self.theta_min_deg
        count = int(math.ceil(span / self.theta_step_deg - 1e-9))
        return self.theta_min_deg + self.theta_step_deg * np.arange(count)

    @property
    def cells(self):
        return len(self.r_values()) * len(self.theta_values())


@dataclass(frozen=True)
class DistanceField:
    """Per-cell results of a sweep, in radius-major grid order.

    ``status`` holds small integer codes indexing ``STATUS_STRINGS``;
    failed cells carry NaN distance.  ``metadata`` records what produced
    the field (objective, step size, iteration budget, schedule).
    """

    r: np.ndarray
    theta_deg: np.ndarray
    x0: np.ndarray
    final_distance: np.ndarray
    status: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.r)
        if not (len(self.theta_deg) == n and self.x0.shape == (n, 2)
                and len(self.final_distance) == n and len(self.status) == n):
            raise ValueError("field columns have inconsistent lengths")
        expected0 = self.r * np.cos(np.radians(self.theta_deg))
        expected1 = self.r * np.sin(np.radians(self.theta_deg))
        if n and (np.max(np.abs(self.x0[:, 0] - expected0)) > 1e-12
                  or np.max(np.abs(self.x0[:, 1] - expected1)) > 1e-12):
            raise ValueError("x0 does not match its polar coordinates")
        bad = ~np.isfinite(self.final_distance) & (self.status != _FAILED)
        if np.any(bad):
            raise ValueError("non-finite distance on a non-failed cell")

    def __len__(self):
        return len(self.r)

    def status_strings(self):
        return np.array(STATUS_STRINGS)[self.status]

    def summary(self, threshold=None):
        """Reduce the field to its extremes, ignoring failed cells."""
        ok = self.status != _FAILED
        if not np.any(ok):
            raise ValueError("every cell failed; no summary available")
        dist = self.final_distance[ok]
        arg = int(np.argmin(dist))
        below = (int(np.sum(dist <= threshold))
                 if threshold is not None else None)
        return FieldSummary(
            min_distance=float(dist[arg]),
            argmin_r=float(self.r[ok][arg]),
            argmin_theta_deg=float(self.theta_deg[ok][arg]),
            max_distance=float(np.max(dist)),
            failed_cells=int(np.sum(~ok)),
            cells_below=below,
        )


@dataclass(frozen=True)
class FieldSummary:
    min_distance: float
    argmin_r: float
    argmin_theta_deg: float
    max_distance: float
    failed_cells: int
    cells_below: int | None = None


def _advance_cells(b00, b01, b11, x0c, x1c, config, schedule):
    """Advance one chunk of cells through the full termination loop.

    Returns final coordinates and per-cell status codes.  Mirrors
    optimizers.run: at each k the order is stationarity check, budget
    check, escape check, then one smoothed step shared by every still
    active cell.
    """
    x0 = x0c.copy()
    x1 = x1c.copy()
    status = np.full(len(x0), _ACTIVE, dtype=np.int8)
    eps2 = config.eps_stationary * config.eps_stationary
    radius = config.escape_radius
    radius2 = radius * radius if math.isfinite(radius) else math.inf
    eta = config.eta
    for k in range(config.max_iters + 1):
        active = status == _ACTIVE
        if not np.any(active):
            break
        g0 = b00 * x0 + b01 * x1
        g1 = b01 * x0 + b11 * x1
        finite = (np.isfinite(g0) & np.isfinite(g1)
                  & np.isfinite(x0) & np.isfinite(x1))
        stationary = active & finite & (g0 * g0 + g1 * g1 <= eps2)
        status[stationary] = _STATIONARY
        active &= ~stationary
        if k == config.max_iters:
            status[active & finite] = _MAX_ITERS
            status[active & ~finite] = _FAILED
            break
        broken = active & ~finite
        status[broken] = _FAILED
        active &= ~broken
        escaped = active & (x0 * x0 + x1 * x1 > radius2)
        status[escaped] = _ESCAPED
        active &= ~escaped
        if not np.any(active):
            break
        s0, s1 = solve_smoothed_pair(float(schedule(k)), g0, g1)
        x0 = np.where(active, x0 - eta * s0, x0)
        x1 = np.where(active, x1 - eta * s1, x1)
    return x0, x1, status


def sweep(objective, grid, config, schedule, threads=None):
    """Run smoothed descent from every grid cell of a 2-d quadratic.

    Parameters
    ----------
    objective : QuadraticObjective with dim == 2
    grid : PolarGrid
    config : RunConfig; trajectory recording must be off (a grid of
        trajectories would defeat the flat-memory design)
    schedule : sigma schedule, shared by all cells
    threads : worker count for chunked execution (None or 1 runs inline).
        Results are written into place by grid position, and every
        operation is elementwise, so the output is identical for any
        thread count.

    Returns a :class:`DistanceField` in radius-major grid order.
    """
    if objective.dim != 2:
        raise ValueError(f"sweeps are 2-d only, got dim {objective.dim}")
    if config.record_trajectory:
        raise ValueError("trajectory recording is not supported in sweeps")
    r_vals = grid.r_values()
    t_vals = grid.theta_values()
    r = np.repeat(r_vals, len(t_vals))
    theta = np.tile(t_vals, len(r_vals))
    x0 = np.empty((len(r), 2))
    x0[:, 0] = r * np.cos(np.radians(theta))
    x0[:, 1] = r * np.sin(np.radians(theta))
    scale = objective.scale
    b00 = scale * objective.matrix[0, 0]
    b01 = scale * objective.matrix[0, 1]
    b11 = scale * objective.matrix[1, 1]

    final0 = np.empty(len(r))
    final1 = np.empty(len(r))
    status = np.empty(len(r), dtype=np.int8)

    def work(lo, hi):
        f0, f1, st = _advance_cells(
            b00, b01, b11, x0[lo:hi, 0], x0[lo:hi, 1], config, schedule)
        final0[lo:hi] = f0
        final1[lo:hi] = f1
        status[lo:hi] = st

    total = len(r)
    if threads is None or threads <= 1 or total < 2:
        work(0, total)
    else:
        workers = int(threads)
        chunk = max(1, -(-total // (4 * workers)))
        bounds = [(lo, min(lo + chunk, total))
                  for lo in range(0, total, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda b: work(*b), bounds))

    distance = np.hypot(final0, final1)
    distance[status == _FAILED] = math.nan
    metadata = {
        "objective": objective.describe(),
        "eta": config.eta,
        "max_iters": config.max_iters,
        "eps_stationary": config.eps_stationary,
        "escape_radius": config.escape_radius,
        "schedule": _describe_schedule(schedule),
    }
    return DistanceField(r=r, theta_deg=theta, x0=x0,
                         final_distance=distance, status=status,
                         metadata=metadata)


def _describe_schedule(schedule):
    name = type(schedule).__name__
    bound = getattr(schedule, "bound", None)
    if bound is None:
        return name
    return f"{name}(bound={bound:g})"


def two_scale_search(objective, coarse_grid, config, schedule,
                     refine_halfwidth_deg=1.0, fine_step_deg=1e-5,
                     threads=None):
    """Coarse sweep, then a fine re-sweep around the coarse minimizer.

    The fine grid keeps the radius of the coarse argmin and re-samples
    theta on [argmin - halfwidth, argmin + halfwidth) at ``fine_step_deg``.
    Returns (coarse_field, fine_field, fine_summary).
    """
    coarse = sweep(objective, coarse_grid, config, schedule, threads)
    pivot = coarse.summary()
    fine_grid = PolarGrid(
        r_min=pivot.argmin_r, r_max=pivot.argmin_r, r_step=coarse_grid.r_step,
        theta_min_deg=pivot.argmin_theta_deg - refine_halfwidth_deg,
        theta_max_deg=pivot.argmin_theta_deg + refine_halfwidth_deg,
        theta_step_deg=fine_step_deg,
    )
    fine = sweep(objective, fine_grid, config, schedule, threads)
    return coarse, fine, fine.summary()


@dataclass(frozen=True)
class TrialReport:
    """One random-start comparison of empirical iterations vs the bound."""

    empirical_iters: int
    bound: float
    ratio: float
    violated: bool


def rate_check(objective, trials, eps, schedule, seed=0):
    """Compare empirical iterations to eps-stationarity against the bound.

    The objective must be positive definite (its minimum value 0 at the
    origin is the reference f*).  Each trial starts from a random point in
    the unit ball, runs smoothed descent with eta = 1 / L until the
    gradient norm drops to eps, and reports empirical iterations next to
    the worst-case bound for the schedule's sigma bound C.
    """
    eigvals = [p.value for p in linalg.sym_eigendecompose(objective.matrix)]
    if min(eigvals) <= 0:
        raise ValueError("rate_check needs a positive definite matrix")
    lipschitz = objective.scale * max(eigvals)
    rng = np.random.default_rng(seed)
    reports = []
    for _ in range(trials):
        direction = rng.standard_normal(objective.dim)
        direction /= np.linalg.norm(direction)
        x0 = direction * rng.uniform(0.0, 1.0)
        f0 = objective.value(x0)
        bound = stationarity_bound_for(schedule, lipschitz, f0, eps)
        config = RunConfig(eta=1.0 / lipschitz,
                           max_iters=int(math.ceil(bound)) + 1,
                           eps_stationary=eps)
        result = run(objective, x0, config, schedule)
        reached = result.status is RunStatus.REACHED_STATIONARY
        used = result.iterations_used
        reports.append(TrialReport(
            empirical_iters=used,
            bound=bound,
            ratio=used / bound if bound > 0 else 0.0,
            violated=not reached or used > bound,
        ))
    return reports


def stationarity_bound_for(schedule, lipschitz, f0, eps):
    """The schedule-bound iteration count for reaching eps-stationarity."""
    return stationarity_iteration_bound(schedule.bound, lipschitz, f0, 0.0, eps)


def atomic_write(path, text):
    """Write text to path via a sibling temp file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def emit_csv(field, path):
    """Write a distance field as CSV with metadata header comments.

    Floats are rendered with 17 significant digits so parsing the file
    back reproduces them bit for bit.  The write is atomic: the file
    appears complete or not at all.
    """
    lines = []
    for key in sorted(field.metadata):
        lines.append(f"# {key}: {field.metadata[key]}")
    lines.append("r,theta_deg,x0_0,x0_1,final_distance,status")
    names = STATUS_STRINGS
    for i in range(len(field)):
        lines.append("%.17g,%.17g,%.17g,%.17g,%.17g,%s" % (
            field.r[i], field.theta_deg[i], field.x0[i, 0], field.x0[i, 1],
            field.final_distance[i], names[field.status[i]]))
    atomic_write(path, "\n".join(lines) + "\n")


def load_csv(path):
    """Parse a file written by :func:`emit_csv` back into a DistanceField."""
    metadata = {}
    rows = []
    with open(path) as handle:
        header = None
        for line in handle:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("# "):
                key, _, value = line[2:].partition(": ")
                metadata[key] = value
                continue
            if header is None:
                header = line
                if header != "r,theta_deg,x0_0,x0_1,final_distance,status":
                    raise ValueError(f"unrecognized CSV header: {header!r}")
                continue
            rows.append(line.split(","))
    if header is None:
        raise ValueError("file has no CSV header line")
    codes = {name: i for i, name in enumerate(STATUS_STRINGS)}
    n = len(rows)
    r = np.empty(n)
    theta = np.empty(n)
    x0 = np.empty((n, 2))
    dist = np.empty(n)
    status = np.empty(n, dtype=np.int8)
    for i, parts in enumerate(rows):
        if len(parts) != 6:
            raise ValueError(f"row {i} has {len(parts)} fields, expected 6")
        r[i] = float(parts[0])
        theta[i] = float(parts[1])
        x0[i, 0] = float(parts[2])
        x0[i, 1] = float(parts[3])
        dist[i] = float(parts[4])
        try:
            status[i] = codes[parts[5]]
        except KeyError:
            raise ValueError(f"row {i} has unknown status {parts[5]!r}") from None
    return DistanceField(r=r, theta_deg=theta, x0=x0, final_distance=dist,
                         status=status, metadata=metadata)


def write_summary_json(summary, path):
    """Write a field summary as a small JSON document, atomically."""
    payload = {
        "min_distance": summary.min_distance,
        "argmin_r": summary.argmin_r,
        "argmin_theta_deg": summary.argmin_theta_deg,
        "max_distance": summary.max_distance,
        "failed_cells": summary.failed_cells,
    }
    if summary.cells_below is not None:
        payload["cells_below"] = summary.cells_below
    atomic_write(path, json.dumps(payload, indent=2) + "\n")
