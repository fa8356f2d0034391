"""Batch execution and serialization: runs, three-way comparisons, replay files.

File formats
------------
trajectory.csv   header `t,agent,px,py[,pz],vx,vy[,vz]`, one row per agent per
                 sampled snapshot. The replay variant appends
                 `heading,v_cmd,omega_cmd`.
metrics.csv      header `t,gamma,dist_min,dist_mean,dist_max,speed_mean,
                 cohesion_radius,pairwise_var`, one row per sampled snapshot.
summary.txt      `key = value` lines (same syntax the config parser reads).

Floats are written with repr(), the shortest decimal that round-trips to the
exact same binary value, so re-parsing a file reconstructs the run verbatim
and repeated runs produce byte-identical CSVs. Undefined metrics print "nan".
"""
from __future__ import annotations

import os
import time as time_mod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .config import ScenarioConfig
from .metrics import MetricsRow, metrics_row
from .simulator import SimulationFault, Trajectory, compute_neighbors, run, sample_initial
from .state import Variant
from .unicycle import ReplayResult

# Analysis windows, as fractions of the run horizon.
LAST20 = (0.80, 1.00)        # settled behavior
EARLY = (0.10, 0.30)         # right after the transient
LATE = (0.20, 1.00)          # everything past the transient
SECOND_HALF = (0.50, 1.00)
STEADY = (0.30, 1.00)
_EPS = 1e-9


def _fmt(value) -> str:
    if value is None:
        return "nan"
    return repr(float(value))


def write_trajectory_csv(path: Path, trajectory: Trajectory):
    dim = trajectory.states[0].dim
    axis = "xyz"[:dim]
    header = "t,agent," + ",".join(f"p{a}" for a in axis) + "," + \
             ",".join(f"v{a}" for a in axis)
    lines = [header]
    for t, state in trajectory:
        for i in range(state.n):
            cells = [_fmt(t), str(i)]
            cells += [_fmt(c) for c in state.positions[i]]
            cells += [_fmt(c) for c in state.velocities[i]]
            lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def read_trajectory_csv(path: Path):
    """Inverse of write_trajectory_csv: (times, positions, velocities) arrays."""
    lines = path.read_text().splitlines()
    dim = (len(lines[0].split(",")) - 2) // 2
    frames: dict[float, list] = {}
    for line in lines[1:]:
        cells = line.split(",")
        t = float(cells[0])
        frames.setdefault(t, []).append([float(c) for c in cells[2:2 + 2 * dim]])
    times = list(frames)
    data = np.array([frames[t] for t in times])
    return np.array(times), data[:, :, :dim], data[:, :, dim:]


METRICS_HEADER = ("t,gamma,dist_min,dist_mean,dist_max,speed_mean,"
                  "cohesion_radius,pairwise_var")


def write_metrics_csv(path: Path, rows: list[MetricsRow]):
    lines = [METRICS_HEADER]
    for r in rows:
        lines.append(",".join(_fmt(v) for v in (
            r.time, r.gamma, r.dist_min, r.dist_mean, r.dist_max,
            r.speed_mean, r.cohesion_radius, r.pairwise_dist_variance)))
    path.write_text("\n".join(lines) + "\n")


def read_metrics_csv(path: Path) -> list[dict[str, float]]:
    lines = path.read_text().splitlines()
    keys = lines[0].split(",")
    return [dict(zip(keys, map(float, line.split(",")))) for line in lines[1:]]


def write_summary(path: Path, entries: dict[str, str]):
    path.write_text("".join(f"{k} = {v}\n" for k, v in entries.items()))


def write_replay_csv(path: Path, result: ReplayResult):
    header = "t,agent,px,py,vx,vy,heading,v_cmd,omega_cmd"
    lines = [header]
    for step, t in enumerate(result.times):
        for i in range(result.positions.shape[1]):
            vel = result.speeds[step, i] * np.array(
                [np.cos(result.headings[step, i]), np.sin(result.headings[step, i])])
            cells = [_fmt(t), str(i), _fmt(result.positions[step, i, 0]),
                     _fmt(result.positions[step, i, 1]), _fmt(vel[0]), _fmt(vel[1]),
                     _fmt(result.headings[step, i]), _fmt(result.v_cmd[step, i]),
                     _fmt(result.omega_cmd[step, i])]
            lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def compute_metrics(trajectory: Trajectory, radius: float) -> list[MetricsRow]:
    return [metrics_row(state, compute_neighbors(state, radius))
            for _, state in trajectory]


def _window(rows: list[MetricsRow], span: tuple[float, float], t_end: float):
    lo, hi = span[0] * t_end - _EPS, span[1] * t_end + _EPS
    return [r for r in rows if lo <= r.time <= hi]


def _mean(values) -> float | None:
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else None


@dataclass
class RunResult:
    config: ScenarioConfig
    trajectory: Trajectory
    metrics: list[MetricsRow]
    summary: dict[str, str]
    files: dict[str, Path] = field(default_factory=dict)


def _summarize(rows: list[MetricsRow], t_end: float, wall_time: float,
               config: ScenarioConfig) -> dict[str, str]:
    entries = {
        "status": "ok",
        "version": __version__,
        "final_gamma": _fmt(rows[-1].gamma),
        "gamma_mean_last20": _fmt(_mean(r.gamma for r in _window(rows, LAST20, t_end))),
        "cohesion_radius_max": _fmt(max(r.cohesion_radius for r in rows)),
        "wall_time_s": _fmt(wall_time),
    }
    entries.update({f"config.{k}": v for k, v in config.echo().items()})
    return entries


def run_scenario(config: ScenarioConfig, plots: bool = True) -> RunResult:
    """Simulate one scenario and write trajectory, metrics, summary (and figures).

    On a simulation fault the summary still gets written, with the failing
    time recorded, before the fault propagates.
    """
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    initial = sample_initial(config.n, config.box, config.v_init_max,
                             config.seed, config.dim)
    started = time_mod.perf_counter()
    try:
        trajectory = run(initial, config.model_params(), config.decimation)
    except SimulationFault as fault:
        entries = {"status": "fault", "version": __version__, "fault": str(fault)}
        if hasattr(fault, "time"):
            entries["fault_time"] = _fmt(fault.time)
        entries.update({f"config.{k}": v for k, v in config.echo().items()})
        write_summary(out / "summary.txt", entries)
        raise
    wall = time_mod.perf_counter() - started
    rows = compute_metrics(trajectory, config.radius)
    files = {"trajectory": out / "trajectory.csv",
             "metrics": out / "metrics.csv",
             "summary": out / "summary.txt"}
    write_trajectory_csv(files["trajectory"], trajectory)
    write_metrics_csv(files["metrics"], rows)
    summary = _summarize(rows, config.t_end, wall, config)
    write_summary(files["summary"], summary)
    if plots:
        from . import report
        files.update(report.save_run_figures(trajectory, rows, out))
    return RunResult(config=config, trajectory=trajectory, metrics=rows,
                     summary=summary, files=files)


@dataclass
class ComparisonCell:
    """Windowed statistics of one (seed, variant) run."""

    seed: int
    variant: str
    status: str = "ok"
    fault: str = ""
    wall_time_s: float = 0.0
    final_gamma: float | None = None
    gamma_mean_last20: float | None = None
    gamma_mean_early: float | None = None
    gamma_min_late: float | None = None
    neighbor_dist_mean_late: float | None = None
    cohesion_radius_rsd: float | None = None
    pairwise_var_initial: float | None = None
    pairwise_var_early: float | None = None
    rows: list[MetricsRow] = field(default_factory=list)

    CSV_FIELDS = ("seed", "variant", "status", "final_gamma", "gamma_mean_last20",
                  "gamma_mean_early", "gamma_min_late", "neighbor_dist_mean_late",
                  "cohesion_radius_rsd", "pairwise_var_initial",
                  "pairwise_var_early", "wall_time_s", "fault")


@dataclass
class ComparisonReport:
    config: ScenarioConfig
    seeds: list[int]
    cells: list[ComparisonCell]
    files: dict[str, Path] = field(default_factory=dict)

    def cell(self, seed: int, variant: Variant | str) -> ComparisonCell:
        name = variant.value if isinstance(variant, Variant) else variant
        for c in self.cells:
            if c.seed == seed and c.variant == name:
                return c
        raise KeyError((seed, name))


def _evaluate_cell(seed: int, variant: Variant, config: ScenarioConfig) -> ComparisonCell:
    cell = ComparisonCell(seed=seed, variant=variant.value)
    initial = sample_initial(config.n, config.box, config.v_init_max, seed, config.dim)
    started = time_mod.perf_counter()
    try:
        trajectory = run(initial, config.model_params(variant), config.decimation)
    except SimulationFault as fault:
        cell.status, cell.fault = "fault", str(fault)
        return cell
    cell.wall_time_s = time_mod.perf_counter() - started
    rows = compute_metrics(trajectory, config.radius)
    cell.rows = rows
    T = config.t_end
    cell.final_gamma = rows[-1].gamma
    cell.gamma_mean_last20 = _mean(r.gamma for r in _window(rows, LAST20, T))
    cell.gamma_mean_early = _mean(r.gamma for r in _window(rows, EARLY, T))
    late = [r.gamma for r in _window(rows, LATE, T)]
    cell.gamma_min_late = None if (not late or any(g is None for g in late)) \
        else float(min(late))
    cell.neighbor_dist_mean_late = _mean(
        r.dist_mean for r in _window(rows, SECOND_HALF, T))
    steady = [r.cohesion_radius for r in _window(rows, STEADY, T)]
    if steady and np.mean(steady) > 0:
        cell.cohesion_radius_rsd = float(np.std(steady) / np.mean(steady))
    cell.pairwise_var_initial = rows[0].pairwise_dist_variance
    early_rows = [r for r in rows if r.time >= EARLY[0] * T - _EPS]
    if early_rows:
        cell.pairwise_var_early = early_rows[0].pairwise_dist_variance
    return cell


def _worker_cap(n_cells: int) -> int:
    env = os.environ.get("FLOCK_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"FLOCK_THREADS must be an integer, got '{env}'") from None
        if cap < 1:
            raise ValueError("FLOCK_THREADS must be >= 1")
        return min(cap, n_cells)
    return min(os.cpu_count() or 1, n_cells)


def run_comparison(config: ScenarioConfig, seeds: list[int],
                   plots: bool = True) -> ComparisonReport:
    """Run all three variants per seed from identical initial conditions.

    Cells run independently (optionally in parallel, capped by the
    FLOCK_THREADS environment variable); a faulted cell is reported in place
    without aborting the others. Cell order in the report is deterministic.
    """
    if not seeds:
        raise ValueError("need at least one seed")
    jobs = [(seed, variant) for seed in seeds for variant in Variant]
    with ThreadPoolExecutor(max_workers=_worker_cap(len(jobs))) as pool:
        cells = list(pool.map(lambda sv: _evaluate_cell(sv[0], sv[1], config), jobs))
    report_obj = ComparisonReport(config=config, seeds=list(seeds), cells=cells)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    cells_path = out / "comparison_cells.csv"
    lines = [",".join(ComparisonCell.CSV_FIELDS)]
    for c in cells:
        row = []
        for name in ComparisonCell.CSV_FIELDS:
            value = getattr(c, name)
            if name in ("seed",):
                row.append(str(value))
            elif name in ("variant", "status", "fault"):
                row.append(str(value).replace(",", ";"))
            else:
                row.append(_fmt(value))
        lines.append(",".join(row))
    cells_path.write_text("\n".join(lines) + "\n")

    agg_path = out / "comparison_aggregate.csv"
    agg_lines = ["variant,n_ok,final_gamma_mean,gamma_mean_last20_mean,"
                 "gamma_min_late_mean,neighbor_dist_mean_late_mean,"
                 "cohesion_radius_rsd_mean"]
    for variant in Variant:
        ok = [c for c in cells if c.variant == variant.value and c.status == "ok"]
        agg_lines.append(",".join([
            variant.value, str(len(ok)),
            _fmt(_mean(c.final_gamma for c in ok)),
            _fmt(_mean(c.gamma_mean_last20 for c in ok)),
            _fmt(_mean(c.gamma_min_late for c in ok)),
            _fmt(_mean(c.neighbor_dist_mean_late for c in ok)),
            _fmt(_mean(c.cohesion_radius_rsd for c in ok)),
        ]))
    agg_path.write_text("\n".join(agg_lines) + "\n")
    report_obj.files = {"cells": cells_path, "aggregate": agg_path}
    if plots:
        from . import report
        report_obj.files.update(report.save_comparison_figure(report_obj, out))
    return report_obj


def write_replay_outputs(result: ReplayResult, out: Path,
                         plots: bool = True) -> dict[str, Path]:
    """Trajectory/metrics/summary files (and figures) for one replay."""
    out.mkdir(parents=True, exist_ok=True)
    files = {"trajectory": out / "trajectory.csv",
             "metrics": out / "metrics.csv",
             "summary": out / "summary.txt"}
    write_replay_csv(files["trajectory"], result)
    write_metrics_csv(files["metrics"], result.metrics)
    violations, first_time = result.wall_violations()
    write_summary(files["summary"], {
        "status": "ok",
        "version": __version__,
        "seed": str(result.seed),
        "k_omega": _fmt(result.k_omega),
        "final_gamma": _fmt(result.final_gamma),
        "max_abs_v_cmd": _fmt(float(np.max(np.abs(result.v_cmd)))),
        "max_abs_omega_cmd": _fmt(float(np.max(np.abs(result.omega_cmd)))),
        "wall_violations": str(violations),
        "first_wall_violation_t": _fmt(first_time),
    })
    if plots:
        from . import report
        files.update(report.save_replay_figures(result, out))
    return files
